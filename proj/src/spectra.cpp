#include "qdlab/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <unordered_map>
#include <unordered_set>

namespace qdlab {

namespace {

// Prefix-free acceptance bookkeeping: enumeration is lexicographic, so every
// prefix of a word is seen before the word itself.
class PrefixFreeSet {
public:
    bool has_prefix_of(const Word& w) const {
        std::string key;
        key.reserve(w.size());
        for (int l : w) {
            key += static_cast<char>('1' + l);
            if (members_.count(key)) return true;
        }
        return false;
    }
    void insert(const Word& w) { members_.insert(word_to_string(w)); }

private:
    std::unordered_set<std::string> members_;
};

}  // namespace

SignMode sign_mode_from_string(const std::string& s) {
    if (s == "+" || s == "plus") return SignMode::plus;
    if (s == "-" || s == "minus") return SignMode::minus;
    if (s == "two" || s == "two_sided" || s == "both") return SignMode::two_sided;
    throw ConfigError("unknown sign mode: " + s);
}

std::string to_string(SignMode m) {
    switch (m) {
        case SignMode::plus: return "+";
        case SignMode::minus: return "-";
        default: return "two_sided";
    }
}

bool measure_passes(double log_value, double log_delta, double alpha,
                    double eta, SignMode mode) {
    // log_delta < 0; omega > delta^(alpha+eta)  <=>  log omega > (alpha+eta) log delta
    switch (mode) {
        case SignMode::plus: return log_value > (alpha + eta) * log_delta;
        case SignMode::minus: return log_value < (alpha - eta) * log_delta;
        default:
            return log_value > (alpha + eta) * log_delta &&
                   log_value < (alpha - eta) * log_delta;
    }
}

bool rotation_passes(double log_rot, double log_delta, double gamma, double eta,
                     SignMode mode) {
    switch (mode) {
        case SignMode::plus: return log_rot > (gamma + eta) * log_delta;
        case SignMode::minus: return log_rot < (gamma - eta) * log_delta;
        default:
            return log_rot > (gamma + eta) * log_delta &&
                   log_rot < (gamma - eta) * log_delta;
    }
}

namespace {

// Word of depth `depth` containing arc segment position `pos` (full shift).
Word containing_word(const PrefractalDomain& dom, std::size_t pos, int depth) {
    const int n = dom.spec().alphabet();
    std::uint64_t block = 1;
    for (int l = 0; l < dom.generation() - depth; ++l) block *= n;
    std::uint64_t value = pos / block;
    Word w(depth);
    for (int l = depth - 1; l >= 0; --l) {
        w[l] = static_cast<int>(value % n);
        value /= n;
    }
    return w;
}

}  // namespace

std::vector<Complex> arc_candidates(const PrefractalDomain& dom, double spacing) {
    const auto& arc = dom.arc_vertices();
    std::vector<Complex> out;
    out.push_back(arc[0]);
    double since = 0.0;
    for (std::size_t i = 1; i + 1 < arc.size(); ++i) {
        since += std::abs(arc[i] - arc[i - 1]);
        if (since >= spacing) {
            out.push_back(arc[i]);
            since = 0.0;
        }
    }
    return out;
}

std::vector<Complex> boundary_candidates(const BoundaryIndex& index,
                                         double spacing) {
    std::vector<Complex> out;
    const double total = index.total_length();
    for (double s = 0.0; s < total; s += spacing)
        out.push_back(index.point_at_arclength(s));
    return out;
}

PackingResult packing_count(const BoundaryIndex& index, const HitPointGrid& grid,
                            std::span<const Complex> candidates, double delta,
                            const PackingParams& p, const PackingRotFn& rot_fn) {
    PackingResult result;
    result.delta = delta;
    const double log_delta = std::log(delta);

    // accepted-disk hash for the disjointness scan
    const double cell = 2.0 * delta;
    std::unordered_map<std::uint64_t, std::vector<Complex>> accepted;
    const auto key = [&](long ix, long iy) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(ix)) << 32) |
               static_cast<std::uint32_t>(iy);
    };
    const auto disjoint_from_accepted = [&](Complex c) {
        const long ix = static_cast<long>(std::floor(c.real() / cell));
        const long iy = static_cast<long>(std::floor(c.imag() / cell));
        for (long dx = -1; dx <= 1; ++dx)
            for (long dy = -1; dy <= 1; ++dy) {
                const auto it = accepted.find(key(ix + dx, iy + dy));
                if (it == accepted.end()) continue;
                for (Complex a : it->second)
                    if (std::abs(a - c) < 2.0 * delta) return false;
            }
        return true;
    };

    for (std::size_t v = 0; v < candidates.size(); ++v) {
        const Complex center = candidates[v];
        if (!disjoint_from_accepted(center)) continue;
        const MeasureEstimate omega =
            grid.measure_of_disk(index, Disk(center, delta));
        // estimates below half a hit clamp to the MC resolution so windows
        // wider than the resolution stay inert
        const double floor_value =
            0.5 / static_cast<double>(std::max<std::uint64_t>(omega.walks, 1));
        const double log_omega = std::log(std::max(omega.value, floor_value));
        bool ok = measure_passes(log_omega, log_delta, p.alpha, p.eta,
                                 p.measure_sign);
        double log_rot = 0.0;
        if (ok) {
            const std::optional<double> lr = rot_fn(v, center);
            if (!lr) {
                ok = false;
            } else {
                log_rot = *lr;
                ok = rotation_passes(log_rot, log_delta, p.gamma, p.eta,
                                     p.rotation_sign);
            }
        }
        if (ok) {
            accepted[key(static_cast<long>(std::floor(center.real() / cell)),
                         static_cast<long>(std::floor(center.imag() / cell)))]
                .push_back(center);
            ++result.count;
        }
        if (p.keep_items)
            result.items.push_back(
                {center, v, omega.value, omega.std_error, log_rot, ok});
    }
    return result;
}

PackingResult packing_count(const PrefractalDomain& dom,
                            const BoundaryIndex& index, const WalkBatch& batch,
                            const HitPointGrid& grid,
                            const RotationEngine* engine, double delta,
                            const PackingParams& p) {
    (void)batch;
    const std::vector<Complex> candidates = arc_candidates(dom, delta / 4.0);

    // symbolic rotation depth: deepest cylinder with renormalized diameter
    // still above delta (per-letter geometric mean scale)
    int sym_depth = 1;
    {
        double mean_log_s = 0.0;
        for (const Letter& l : dom.spec().letters)
            mean_log_s += std::log(l.scale);
        mean_log_s /= dom.spec().alphabet();
        sym_depth = std::clamp(
            static_cast<int>(std::floor(std::log(delta) / mean_log_s)), 1,
            dom.generation());
    }

    // candidate index -> arc segment position (for the containing word)
    const auto& arc = dom.arc_vertices();
    std::vector<std::size_t> positions;
    positions.reserve(candidates.size());
    {
        std::size_t i = 0;
        for (const Complex& c : candidates) {
            while (i + 1 < arc.size() && arc[i] != c) ++i;
            positions.push_back(std::min(i, arc.size() - 2));
        }
    }

    const PackingRotFn rot_fn = [&](std::size_t v,
                                    Complex center) -> std::optional<double> {
        if (p.rot_weights == RotWeights::symbolic) {
            return dom.spec().angle_sum(
                containing_word(dom, positions[v], sym_depth));
        }
        try {
            return engine->rot_disk(Disk(center, delta)).log_rot;
        } catch (const Error&) {
            return std::nullopt;
        }
    };
    return packing_count(index, grid, candidates, delta, p, rot_fn);
}

std::vector<std::vector<int>> word_index_set(const RepellerSpec& spec,
                                             double delta, double tau) {
    if (!(tau >= 0.0 && tau <= 0.5)) throw Error("word_index_set: tau in [0, 0.5]");
    const int n = spec.alphabet();
    std::vector<double> log_s(n);
    for (int j = 0; j < n; ++j) log_s[j] = std::log(spec.letters[j].scale);
    const double lo = std::log(delta * (1.0 - tau)) - 1e-12;
    const double hi = std::log(delta * (1.0 + tau)) + 1e-12;

    std::vector<std::vector<int>> out;
    std::vector<int> current(n, 0);
    const std::function<void(int, double)> rec = [&](int j, double acc) {
        if (j == n) {
            if (acc >= lo && acc <= hi) out.push_back(current);
            return;
        }
        // k_j copies of letter j: acc + k*log_s[j] must stay >= lo eventually
        double a = acc;
        for (int k = 0;; ++k) {
            if (a < lo) break;  // product already below the window floor
            current[j] = k;
            rec(j + 1, a);
            a += log_s[j];
        }
        current[j] = 0;
    };
    rec(0, 0.0);
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

struct WordEnumState {
    const RepellerSpec* spec;
    double lo_log, hi_log;  // admissible log-product window
    std::size_t max_words;
    std::size_t max_depth;
    std::function<void(const Word&, double)> emit;  // word, log scale product
    std::size_t emitted = 0;
};

void enumerate_scale_window(WordEnumState& st, Word& w, double acc) {
    const int n = st.spec->alphabet();
    if (acc >= st.lo_log && acc <= st.hi_log && !w.empty()) {
        st.emit(w, acc);
        if (++st.emitted > st.max_words) throw BudgetExceeded();
    }
    if (acc < st.lo_log) return;  // all extensions shrink the product further
    if (w.size() >= st.max_depth) {
        if (acc > st.hi_log)
            throw Error(
                "word enumeration: scale window needs words deeper than the "
                "realized generation");
        return;
    }
    for (int l = 0; l < n; ++l) {
        if (!w.empty() && !st.spec->adjacency[w.back()][l]) continue;
        w.push_back(l);
        enumerate_scale_window(st, w, acc + std::log(st.spec->letters[l].scale));
        w.pop_back();
    }
}

}  // namespace

WordCountResult word_count(const RepellerSpec& spec, double delta,
                           const WordCountParams& p, const PrefractalDomain* dom,
                           const WalkBatch* batch, const RotationEngine* engine) {
    WordCountResult result;
    result.delta = delta;
    const double log_delta = std::log(delta);
    const std::vector<double> surrogate = spec.surrogate_letter_measures();

    MeasureEstimate arc_total;
    if (p.weights == WordWeights::mc) {
        if (dom == nullptr || batch == nullptr)
            throw Error("word_count: mc weights need a prefractal and a batch");
        const auto [f, l] = dom->arc_boundary_range();
        arc_total = batch->measure_range(f, l);
        if (arc_total.hits < p.min_hits) throw BudgetExceeded();
    }
    const std::size_t depth_cap =
        p.weights == WordWeights::mc
            ? static_cast<std::size_t>(dom->generation())
            : 64;

    PrefixFreeSet accepted;
    const auto evaluate = [&](const Word& w, double log_scale_prod) {
        (void)log_scale_prod;
        double log_omega, log_rot;
        if (p.weights == WordWeights::surrogate) {
            log_omega = 0.0;
            for (int l : w) log_omega += std::log(surrogate[l]);
            log_rot = spec.angle_sum(w);
        } else {
            const Cylinder cyl = dom->cylinder(w);
            const auto [f, l] = dom->boundary_range_of_arc(cyl.arc_lo, cyl.arc_hi);
            const MeasureEstimate m = batch->measure_range(f, l);
            if (m.hits < p.min_hits) throw BudgetExceeded();
            log_omega = std::log(m.value / arc_total.value);
            if (static_cast<int>(w.size()) <= p.geometric_depth_cap &&
                engine != nullptr) {
                log_rot = engine->rot_crosscut(dom->cylinder_arc(cyl)).log_rot;
            } else {
                log_rot = spec.angle_sum(w);
            }
        }
        const bool pass =
            measure_passes(log_omega, log_delta, p.alpha, p.eta, p.measure_sign) &&
            rotation_passes(log_rot, log_delta, p.gamma, p.eta, p.rotation_sign);
        if (pass && !accepted.has_prefix_of(w)) {
            accepted.insert(w);
            ++result.count;
        }
        if (p.keep_items) result.items.push_back({w, log_omega, log_rot, pass});
    };

    WordEnumState st{&spec,
                     std::log(delta * (1.0 - p.tau)) - 1e-12,
                     std::log(delta * (1.0 + p.tau)) + 1e-12,
                     p.max_words,
                     depth_cap,
                     evaluate,
                     0};
    Word w;
    enumerate_scale_window(st, w, 0.0);
    result.enumerated = st.emitted;
    return result;
}

CrosscutResult crosscut_count(const RepellerSpec& spec, double r,
                              const CrosscutParams& p,
                              const PrefractalDomain* dom,
                              const WalkBatch* batch) {
    const double one_minus_r = 1.0 - r;
    const double lll = std::log(std::log(std::log(1.0 / one_minus_r)));
    if (!(lll > 0.0))
        throw Error("crosscut_count: need logloglog(1/(1-r)) > 0");
    const double paper_halfwidth = one_minus_r / lll;

    CrosscutResult result;
    const double log_lo = std::log(one_minus_r / p.window_factor) - 1e-12;
    const double log_hi = std::log(one_minus_r * p.window_factor) + 1e-12;
    const double diam_floor = std::pow(one_minus_r, 1.0 - p.a);
    const double log_rot_floor = -p.b * std::log(1.0 / one_minus_r);

    const std::vector<double> surrogate = spec.surrogate_letter_measures();
    MeasureEstimate arc_total;
    if (p.weights == WordWeights::mc) {
        if (dom == nullptr || batch == nullptr)
            throw Error("crosscut_count: mc weights need a prefractal and a batch");
        const auto [f, l] = dom->arc_boundary_range();
        arc_total = batch->measure_range(f, l);
    }

    PrefixFreeSet accepted;
    std::size_t emitted = 0;
    const std::size_t depth_cap =
        p.weights == WordWeights::mc
            ? static_cast<std::size_t>(dom->generation())
            : 64;
    // Enumerate admissible words pruning on the (monotone) measure.
    const std::function<void(Word&, double)> rec = [&](Word& w, double log_omega) {
        if (log_omega < log_lo) return;
        if (!w.empty() && log_omega <= log_hi) {
            if (++emitted > p.max_words) throw BudgetExceeded();
            const double omega = std::exp(log_omega);
            const double renorm_diam = spec.scale_product(w);
            const double log_rot = spec.angle_sum(w);
            const bool in_paper =
                std::abs(omega / one_minus_r - 1.0) <= paper_halfwidth / one_minus_r;
            const bool pass = renorm_diam >= diam_floor && log_rot >= log_rot_floor;
            if (pass && !accepted.has_prefix_of(w)) {
                accepted.insert(w);
                ++result.count;
                if (in_paper) ++result.count_paper_window;
            }
            if (p.keep_items)
                result.items.push_back(
                    {w, omega, renorm_diam, log_rot, in_paper, pass});
        }
        if (w.size() >= depth_cap) return;
        for (int l = 0; l < spec.alphabet(); ++l) {
            if (!w.empty() && !spec.adjacency[w.back()][l]) continue;
            double next_log;
            if (p.weights == WordWeights::surrogate) {
                next_log = log_omega + std::log(surrogate[l]);
            } else {
                w.push_back(l);
                const Cylinder cyl = dom->cylinder(w);
                const auto [f, la] =
                    dom->boundary_range_of_arc(cyl.arc_lo, cyl.arc_hi);
                const MeasureEstimate m = batch->measure_range(f, la);
                w.pop_back();
                next_log = m.value > 0.0
                               ? std::log(m.value / arc_total.value)
                               : -1e9;
            }
            w.push_back(l);
            rec(w, next_log);
            w.pop_back();
        }
    };
    Word w;
    rec(w, 0.0);
    result.window_empty = (emitted == 0);
    return result;
}

DistortionResult distortion_count(const BoundaryIndex& index,
                                  const WalkBatch& batch,
                                  const RotationEngine& engine, double r,
                                  const DistortionParams& p) {
    const double one_minus_r = 1.0 - r;
    const double log_omr = std::log(one_minus_r);
    const std::size_t arcs =
        static_cast<std::size_t>(std::ceil(1.0 / one_minus_r));
    const auto& hits = batch.segment_hits();
    const std::size_t nseg = hits.size();
    std::uint64_t total = 0;
    for (std::uint64_t h : hits) total += h;
    if (total < 10 * arcs) throw InsufficientHits();

    // quantile positions in segment space
    std::vector<std::uint32_t> cut(arcs + 1);
    cut[0] = 0;
    std::uint64_t acc = 0;
    std::size_t j = 1;
    for (std::uint32_t s = 0; s < nseg && j < arcs; ++s) {
        acc += hits[s];
        while (j < arcs &&
               acc >= static_cast<std::uint64_t>(
                          (static_cast<long double>(total) * j) / arcs)) {
            cut[j++] = s + 1;
        }
    }
    while (j < arcs) cut[j++] = static_cast<std::uint32_t>(nseg);
    cut[arcs] = static_cast<std::uint32_t>(nseg);

    DistortionResult result;
    result.arcs = arcs;
    const Polyline& boundary = index.boundary();

    for (std::size_t a = 0; a < arcs; ++a) {
        const std::uint32_t first = cut[a];
        const std::uint32_t last = cut[a + 1];
        if (first >= last) continue;
        // arc vertex chain (subsampled for long arcs)
        const std::size_t len = last - first;
        const std::size_t stride = std::max<std::size_t>(1, len / 2048);
        std::vector<Complex> pts;
        pts.reserve(len / stride + 2);
        for (std::size_t s = first; s < last; s += stride)
            pts.push_back(boundary.segment(s).a);
        pts.push_back(boundary.segment(last - 1).b);
        const double diam = point_set_diameter(pts);
        const double p_proxy = diam / (kTwoPi * one_minus_r);

        // arclength midpoint
        const double arc_len = index.arclength_at_vertex(last) -
                               index.arclength_at_vertex(first);
        const Complex midpoint = index.point_at_arclength(
            index.arclength_at_vertex(first) + 0.5 * arc_len);

        bool pass = measure_passes(std::log(std::max(p_proxy, 1e-300)), log_omr,
                                   -p.a, p.eta, p.measure_sign);
        double log_rot = 0.0;
        if (pass) {
            try {
                log_rot = engine.rot_crosscut_at(midpoint, diam).log_rot;
            } catch (const Error&) {
                pass = false;
            }
            if (pass)
                pass = rotation_passes(log_rot, log_omr, -p.b, p.eta,
                                       p.rotation_sign);
        }
        if (pass) ++result.count;
        if (p.keep_items)
            result.items.push_back(
                {first, last, diam, p_proxy, log_rot, pass});
    }
    result.lambda_fraction =
        static_cast<double>(result.count) / static_cast<double>(arcs);
    result.lambda_length = kTwoPi * one_minus_r * static_cast<double>(result.count);
    result.d_exponent =
        result.count == 0
            ? -std::numeric_limits<double>::infinity()
            : std::log(result.lambda_fraction) / std::log(1.0 / one_minus_r) + 1.0;
    return result;
}

ExponentFit fit_exponent(std::span<const std::pair<double, double>> rows) {
    ExponentFit fit;
    std::vector<std::pair<double, double>> pts;  // (log(1/scale), log count)
    for (const auto& [scale, value] : rows) {
        if (!(value > 0.0) || !(scale > 0.0)) {
            ++fit.dropped;
            continue;
        }
        pts.emplace_back(std::log(1.0 / scale), std::log(value));
    }
    fit.used = pts.size();
    if (pts.size() < 3) throw TooFewScales();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(pts.size());
    const double denom = n * sxx - sx * sx;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss = 0;
    for (const auto& [x, y] : pts)
        ss += sqr(y - fit.slope * x - fit.intercept);
    fit.residual_rms = std::sqrt(ss / n);
    return fit;
}

}  // namespace qdlab
