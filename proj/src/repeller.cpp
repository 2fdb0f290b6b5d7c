#include "qdlab/repeller.hpp"

#include <algorithm>
#include <cmath>

#include "qdlab/rng.hpp"

namespace qdlab {

std::string word_to_string(const Word& w) {
    std::string s;
    s.reserve(w.size());
    for (int l : w) s += static_cast<char>('1' + l);
    return s;
}

Word word_from_string(const std::string& s) {
    Word w;
    w.reserve(s.size());
    for (char c : s) {
        if (c < '1' || c > '9') throw Error("word digits must be 1..9");
        w.push_back(c - '1');
    }
    return w;
}

double RepellerSpec::expansion_rate() const {
    double smax = 0.0;
    for (const Letter& l : letters) smax = std::max(smax, l.scale);
    return 1.0 / smax;
}

bool RepellerSpec::full_shift() const {
    for (const auto& row : adjacency)
        for (std::uint8_t a : row)
            if (!a) return false;
    return true;
}

bool RepellerSpec::admissible(const Word& w) const {
    if (w.empty()) return false;
    const int n = alphabet();
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] < 0 || w[i] >= n) return false;
        if (i > 0 && !adjacency[w[i - 1]][w[i]]) return false;
    }
    return true;
}

void RepellerSpec::validate() const {
    const int n = alphabet();
    if (n < 2) throw Error("RepellerSpec: need at least 2 letters");
    for (const Letter& l : letters) {
        if (!(l.scale > 0.0 && l.scale < 1.0))
            throw Error("RepellerSpec: Expanding violation, need scales in (0,1)");
        if (!l.orientation_preserving)
            throw Error("RepellerSpec: only orientation-preserving letters supported");
    }
    if (adjacency.size() != static_cast<std::size_t>(n))
        throw Error("RepellerSpec: adjacency size mismatch");
    for (const auto& row : adjacency)
        if (row.size() != static_cast<std::size_t>(n))
            throw Error("RepellerSpec: adjacency size mismatch");

    // Mixing: the adjacency matrix must be primitive (boolean powers up to
    // the Wielandt bound n^2 - 2n + 2).
    {
        std::vector<std::vector<std::uint8_t>> m = adjacency;
        const int bound = std::max(n * n - 2 * n + 2, 1);
        bool primitive = false;
        for (int p = 1; p <= bound && !primitive; ++p) {
            bool all = true;
            for (const auto& row : m)
                for (std::uint8_t v : row)
                    if (!v) all = false;
            if (all) {
                primitive = true;
                break;
            }
            std::vector<std::vector<std::uint8_t>> next(
                n, std::vector<std::uint8_t>(n, 0));
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < n; ++k)
                    if (m[i][k])
                        for (int j = 0; j < n; ++j)
                            if (adjacency[k][j]) next[i][j] = 1;
            m = std::move(next);
        }
        if (!primitive)
            throw Error("RepellerSpec: Mixing violation (adjacency not primitive)");
    }

    // Markov property, checked geometrically at generation 1: images of the
    // base arc chain endpoint-to-endpoint across [0,1].
    const double eps = 1e-9;
    if (std::abs(letters.front().apply(0.0)) > eps) throw NotMarkov();
    for (int j = 0; j + 1 < n; ++j) {
        if (std::abs(letters[j].apply(1.0) - letters[j + 1].apply(0.0)) > eps)
            throw NotMarkov();
    }
    if (std::abs(letters.back().apply(1.0) - 1.0) > eps) throw NotMarkov();
}

RepellerSpec RepellerSpec::reflected() const {
    RepellerSpec r = *this;
    r.name = name + "_reflected";
    for (Letter& l : r.letters) {
        l.angle = -l.angle;
        l.translation = std::conj(l.translation);
    }
    return r;
}

double RepellerSpec::moran_dimension() const {
    double lo = 1e-9, hi = 8.0;
    const auto excess = [&](double d) {
        double acc = 0.0;
        for (const Letter& l : letters) acc += std::pow(l.scale, d);
        return acc - 1.0;
    };
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<double> RepellerSpec::surrogate_letter_measures() const {
    const double d = moran_dimension();
    std::vector<double> out;
    out.reserve(letters.size());
    double total = 0.0;
    for (const Letter& l : letters) {
        out.push_back(std::pow(l.scale, d));
        total += out.back();
    }
    for (double& v : out) v /= total;
    return out;
}

double RepellerSpec::scale_product(const Word& w) const {
    double p = 1.0;
    for (int l : w) p *= letters[l].scale;
    return p;
}

double RepellerSpec::angle_sum(const Word& w) const {
    double a = 0.0;
    for (int l : w) a += letters[l].angle;
    return a;
}

namespace {

std::vector<std::vector<std::uint8_t>> full_adjacency(int n) {
    return std::vector<std::vector<std::uint8_t>>(
        n, std::vector<std::uint8_t>(n, 1));
}

std::vector<Letter> chained_letters(const std::vector<Complex>& derivatives) {
    std::vector<Letter> letters;
    Complex p = 0.0;
    for (Complex d : derivatives) {
        letters.push_back({std::abs(d), std::arg(d), p, true});
        p += d;
    }
    return letters;
}

}  // namespace

RepellerSpec koch_spec() {
    const Complex u = std::polar(1.0 / 3.0, kPi / 3.0);
    RepellerSpec s;
    s.name = "koch";
    s.letters = chained_letters({1.0 / 3.0, u, std::conj(u), 1.0 / 3.0});
    s.adjacency = full_adjacency(4);
    s.validate();
    return s;
}

RepellerSpec twisted_koch_spec(double t) {
    // Uniform spiral bias: every letter angle gains t. The generator chain
    // across [0,1] closes again with scales
    //   s1 = s4 = (cos t - 1/3)/2,  s2 = 1/3 - sin(t)/sqrt(3),
    //   s3 = 1/3 + sin(t)/sqrt(3),
    // which reduce to the classic 1/3 at t = 0.
    const double sa = 0.5 * (std::cos(t) - 1.0 / 3.0);
    const double sb = 1.0 / 3.0 - std::sin(t) / std::sqrt(3.0);
    const double sc = 1.0 / 3.0 + std::sin(t) / std::sqrt(3.0);
    if (!(sa > 0.0 && sb > 0.0 && sc > 0.0 && sc < 1.0))
        throw Error("twisted_koch: twist angle out of the valid range");
    RepellerSpec s;
    s.name = "twisted_koch";
    s.letters =
        chained_letters({std::polar(sa, t), std::polar(sb, kPi / 3.0 + t),
                         std::polar(sc, -kPi / 3.0 + t), std::polar(sa, t)});
    s.adjacency = full_adjacency(4);
    s.validate();
    return s;
}

RepellerSpec carleson_linear_spec() {
    RepellerSpec s;
    s.name = "carleson_linear";
    s.letters = chained_letters({0.5, 0.3, 0.2});
    s.adjacency = full_adjacency(3);
    s.validate();
    return s;
}

JordanDomain reflect(const JordanDomain& domain) {
    std::vector<Complex> v;
    v.reserve(domain.boundary.vertex_count());
    for (Complex p : domain.boundary.vertices()) v.push_back(std::conj(p));
    // Conjugation reverses orientation; reverse the list to restore it.
    std::reverse(v.begin(), v.end());
    Polyline b(std::move(v), domain.boundary.closed());
    return {std::move(b), std::conj(domain.basepoint), "reflected copy"};
}

namespace {

// Vertex i of the generation-k arc in base coordinates, i in [0, N^k].
Complex arc_vertex(const RepellerSpec& spec, int k, std::uint64_t i,
                   std::uint64_t total) {
    if (i >= total) return 1.0;
    const int n = spec.alphabet();
    Complex z = 0.0;
    std::uint64_t rem = i;
    for (int l = 0; l < k; ++l) {
        const int digit = static_cast<int>(rem % n);
        rem /= n;
        z = spec.letters[digit].apply(z);
    }
    return z;
}

}  // namespace

PrefractalDomain generate_prefractal(const RepellerSpec& spec, int generation) {
    spec.validate();
    if (generation < 1 || generation > spec.k_max)
        throw Error("generate_prefractal: generation out of range (k_max)");
    if (!spec.full_shift())
        throw NotMarkov(
            "generate_prefractal: geometric realization requires a full shift");

    const int n = spec.alphabet();
    std::uint64_t m = 1;
    for (int l = 0; l < generation; ++l) m *= n;

    std::vector<Complex> arc(m + 1);
    for (std::uint64_t i = 0; i <= m; ++i) arc[i] = arc_vertex(spec, generation, i, m);
    arc[0] = 0.0;
    arc[m] = 1.0;

    // Hexagon with the base side (0,0)-(1,0) and the body below; the three
    // alternating sides G0G1, G2G3, G4G5 carry copies of the arc rotated by
    // -120 and -240 degrees about the center, the other three stay straight.
    // Counterclockwise traversal runs every arc copy B->A.
    const double s3 = std::sqrt(3.0);
    const Complex center(0.5, -s3 / 2.0);
    const Complex g[6] = {{0.0, 0.0}, {1.0, 0.0},  {1.5, -s3 / 2.0},
                          {1.0, -s3}, {0.0, -s3},  {-0.5, -s3 / 2.0}};
    const Complex rot120 = std::polar(1.0, -2.0 * kPi / 3.0);
    const auto embed = [&](Complex z, int copies) {
        Complex w = z;
        for (int c = 0; c < copies; ++c) w = center + rot120 * (w - center);
        return w;
    };

    std::vector<Complex> boundary;
    boundary.reserve(3 * m + 3);
    boundary.push_back(g[0]);
    // copy on G4G5 (rotated twice), traversed G5 -> G4
    for (std::uint64_t i = m; i >= 1; --i) boundary.push_back(embed(arc[i], 2));
    boundary.push_back(g[4]);
    boundary.push_back(g[3]);
    // copy on G2G3, traversed G3 -> G2
    for (std::uint64_t i = m - 1; i >= 1; --i) boundary.push_back(embed(arc[i], 1));
    boundary.push_back(g[2]);
    boundary.push_back(g[1]);
    // base arc, traversed G1 -> G0 (the closure back to vertex 0)
    for (std::uint64_t i = m - 1; i >= 1; --i) boundary.push_back(arc[i]);

    Polyline poly(std::move(boundary), true, Polyline::Validate::simple);
    if (point_in_jordan(poly, center) != Location::inside)
        throw NotSimple("generate_prefractal: basepoint not interior");

    JordanDomain dom{std::move(poly), center,
                     "repeller generation " + std::to_string(generation)};
    // base arc block: boundary segments [2m+3, 3m+3), traversed B->A
    return PrefractalDomain(spec, generation, std::move(arc), std::move(dom),
                            static_cast<std::uint32_t>(2 * m + 3), true);
}

std::uint32_t PrefractalDomain::boundary_segment_of_arc(std::size_t i) const {
    const std::size_t m = arc_segment_count();
    return arc_block_reversed_
               ? arc_block_first_ + static_cast<std::uint32_t>(m - 1 - i)
               : arc_block_first_ + static_cast<std::uint32_t>(i);
}

std::pair<std::uint32_t, std::uint32_t> PrefractalDomain::boundary_range_of_arc(
    std::size_t lo, std::size_t hi) const {
    const std::size_t m = arc_segment_count();
    if (arc_block_reversed_)
        return {arc_block_first_ + static_cast<std::uint32_t>(m - hi),
                arc_block_first_ + static_cast<std::uint32_t>(m - lo)};
    return {arc_block_first_ + static_cast<std::uint32_t>(lo),
            arc_block_first_ + static_cast<std::uint32_t>(hi)};
}

Cylinder PrefractalDomain::cylinder(const Word& w) const {
    if (!spec_.admissible(w)) throw Inadmissible();
    if (static_cast<int>(w.size()) > generation_)
        throw Error("cylinder: word longer than the realized generation");
    const int n = spec_.alphabet();
    std::uint64_t value = 0;
    for (int l : w) value = value * n + static_cast<std::uint64_t>(l);
    std::uint64_t block = 1;
    for (int l = 0; l < generation_ - static_cast<int>(w.size()); ++l) block *= n;
    const std::size_t lo = static_cast<std::size_t>(value * block);
    const std::size_t hi = lo + static_cast<std::size_t>(block);
    std::vector<Complex> pts(arc_vertices_.begin() + lo,
                             arc_vertices_.begin() + hi + 1);
    const double raw = point_set_diameter(pts);
    return {w, lo, hi, raw, spec_.scale_product(w)};
}

Polyline PrefractalDomain::cylinder_arc(const Cylinder& c) const {
    std::vector<Complex> pts(arc_vertices_.begin() + c.arc_lo,
                             arc_vertices_.begin() + c.arc_hi + 1);
    return Polyline(std::move(pts), false);
}

PrefractalDomain PrefractalDomain::reflected() const {
    const auto& old = domain_.boundary.vertices();
    const std::size_t nv = old.size();
    std::vector<Complex> v(nv);
    v[0] = std::conj(old[0]);
    for (std::size_t t = 1; t < nv; ++t) v[t] = std::conj(old[nv - t]);
    Polyline b(std::move(v), true);
    std::vector<Complex> arc(arc_vertices_.size());
    for (std::size_t i = 0; i < arc.size(); ++i) arc[i] = std::conj(arc_vertices_[i]);
    JordanDomain dom{std::move(b), std::conj(domain_.basepoint), "reflected copy"};
    // Index reversal pivoted at vertex 0 puts the arc block at the front,
    // traversed A->B.
    if (arc_block_reversed_) {
        return PrefractalDomain(spec_.reflected(), generation_, std::move(arc),
                                std::move(dom), 0, false);
    }
    const std::size_t m = arc_segment_count();
    return PrefractalDomain(spec_.reflected(), generation_, std::move(arc),
                            std::move(dom),
                            static_cast<std::uint32_t>(2 * m + 3), true);
}

double dilatation_estimate(const Polyline& boundary, std::size_t samples,
                           std::uint64_t seed) {
    if (samples < 1000) throw Error("dilatation_estimate: need >= 1e3 samples");
    const auto& v = boundary.vertices();
    const std::size_t n = v.size();
    double khat = 1.0;
    const auto run_diameter = [&](std::size_t i, std::size_t j) {
        std::vector<Complex> pts;
        const std::size_t len = (j + n - i) % n + 1;
        const std::size_t stride = std::max<std::size_t>(1, len / 4096);
        pts.reserve(len / stride + 2);
        for (std::size_t s = 0; s < len; s += stride) pts.push_back(v[(i + s) % n]);
        pts.push_back(v[j]);
        return point_set_diameter(pts);
    };
    for (std::size_t trial = 0; trial < samples; ++trial) {
        CounterRng rng(seed, trial);
        const std::size_t i = rng.next_below(n);
        const std::size_t j = rng.next_below(n);
        if (i == j) continue;
        std::size_t lo = i, hi = j;
        if (run_diameter(j, i) < run_diameter(i, j)) {
            lo = j;
            hi = i;
        }
        const Complex w1 = v[lo], w2 = v[hi];
        const double base = std::abs(w1 - w2);
        if (base <= boundary.eps_geom()) continue;
        const std::size_t len = (hi + n - lo) % n;
        for (std::size_t s = 1; s < len; ++s) {
            const Complex w = v[(lo + s) % n];
            const double r = (std::abs(w1 - w) + std::abs(w2 - w)) / base;
            if (r > khat) khat = r;
        }
    }
    return khat;
}

namespace {

// Growing point chain with lazily maintained hull, used to track the
// diameter of a prefix of a polyline.
class ChainDiameter {
public:
    void reset(Complex p) {
        hull_.clear();
        recent_.clear();
        all_.clear();
        all_.push_back(p);
        recent_.push_back(p);
        diam_ = 0.0;
    }
    void add(Complex p) {
        for (Complex q : hull_) diam_ = std::max(diam_, std::abs(p - q));
        for (Complex q : recent_) diam_ = std::max(diam_, std::abs(p - q));
        recent_.push_back(p);
        all_.push_back(p);
        if (recent_.size() >= 64) compact();
    }
    double diameter() const { return diam_; }
    double diameter_with(Complex p) const {
        double d = diam_;
        for (Complex q : hull_) d = std::max(d, std::abs(p - q));
        for (Complex q : recent_) d = std::max(d, std::abs(p - q));
        return d;
    }
    const std::vector<Complex>& points() const { return all_; }

private:
    void compact() {
        std::vector<Complex> merged = hull_;
        merged.insert(merged.end(), recent_.begin(), recent_.end());
        hull_ = convex_hull_points(merged);
        recent_.clear();
    }
    std::vector<Complex> hull_;
    std::vector<Complex> recent_;
    std::vector<Complex> all_;
    double diam_ = 0.0;
};

}  // namespace

std::vector<ArcPiece> greedy_arc_partition(const Polyline& curve, double delta,
                                           double length_ratio_cap) {
    if (curve.closed()) throw Error("greedy_arc_partition: open chains only");
    const double total_diam =
        point_set_diameter(std::span<const Complex>(curve.vertices()));
    if (!(delta > total_diam / length_ratio_cap && delta < total_diam))
        throw DeltaOutOfRange();

    std::vector<ArcPiece> pieces;
    const std::size_t nseg = curve.segment_count();
    std::size_t seg = 0;
    double t = 0.0;
    ChainDiameter chain;
    chain.reset(curve.segment(0).a);

    ArcPiece cur{};
    cur.seg_begin = 0;
    cur.t_begin = 0.0;

    const auto close_piece = [&](std::size_t end_seg, double end_t) {
        cur.seg_end = end_seg;
        cur.t_end = end_t;
        cur.points = chain.points();
        cur.diameter = chain.diameter();
        pieces.push_back(cur);
    };

    while (seg < nseg) {
        const Segment s = curve.segment(seg);
        if (chain.diameter_with(s.b) <= delta) {
            chain.add(s.b);
            ++seg;
            t = 0.0;
            continue;
        }
        // The diameter crosses delta on this segment; the crossing is unique
        // because max-distance-to-a-set is convex along the segment.
        double lo = t, hi = 1.0;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            (chain.diameter_with(s.at(mid)) <= delta ? lo : hi) = mid;
        }
        const double cut = 0.5 * (lo + hi);
        const Complex cut_point = s.at(cut);
        chain.add(cut_point);
        close_piece(seg, cut);
        cur = ArcPiece{};
        cur.seg_begin = seg;
        cur.t_begin = cut;
        chain.reset(cut_point);
        t = cut;
    }
    if (chain.points().size() > 1 || pieces.empty()) close_piece(nseg - 1, 1.0);
    return pieces;
}

}  // namespace qdlab
