#include "qdlab/rotation.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <unordered_map>

namespace qdlab {

RotationEngine::RotationEngine(const JordanDomain& domain,
                               const BoundaryIndex& index, RotOptions opts)
    : domain_(&domain), index_(&index), opts_(opts) {}

double RotationEngine::obstacle_distance(Complex p, const Disk& forbidden) const {
    // The coarse field underestimates; a smaller ball is still a valid ball,
    // so exact distances are only needed near the boundary.
    const double lb = index_->distance_lower_bound(p);
    const double db = lb > 8.0 * index_->coarse_cell()
                          ? lb
                          : index_->nearest(p).distance;
    const double dd = std::abs(p - forbidden.center) - forbidden.radius;
    return std::min(db, dd);
}

namespace {

struct BallNode {
    Complex center;
    double radius;
    double g;  // path length so far
    int parent;
};

struct QueueEntry {
    double f;
    std::uint64_t order;  // insertion order, deterministic tie-break
    int node;
    bool operator>(const QueueEntry& o) const {
        return f > o.f || (f == o.f && order > o.order);
    }
};

// visited key: radius octave + quantized position
std::uint64_t visit_key(Complex p, double radius) {
    int exp2;
    std::frexp(radius, &exp2);
    const double q = std::ldexp(1.0, exp2 - 1);  // radius/2-ish cell
    const auto qz = [&](double x) {
        return static_cast<std::uint64_t>(
                   static_cast<std::int64_t>(std::floor(x / q))) &
               0xffffff;
    };
    return (static_cast<std::uint64_t>(static_cast<std::uint8_t>(exp2 + 128))
            << 48) |
           (qz(p.real()) << 24) | qz(p.imag());
}

}  // namespace

std::optional<std::vector<Complex>> RotationEngine::find_path(
    Complex to, const Disk& forbidden, double clearance_floor) const {
    for (const double john : {opts_.john_floor, 0.0}) {
        auto path = find_path_once(to, forbidden, clearance_floor, john);
        if (path) return path;
        if (john == 0.0) break;
    }
    return std::nullopt;
}

std::optional<std::vector<Complex>> RotationEngine::find_path_once(
    Complex to, const Disk& forbidden, double clearance_floor,
    double john_floor) const {
    const Complex from = domain_->basepoint;
    const double d0 = obstacle_distance(from, forbidden);
    if (d0 <= clearance_floor) return std::nullopt;

    std::vector<BallNode> arena;
    std::priority_queue<QueueEntry, std::vector<QueueEntry>,
                        std::greater<QueueEntry>>
        open;
    std::unordered_map<std::uint64_t, double> visited;
    std::uint64_t order = 0;

    const double w = opts_.heuristic_weight;
    const double inv_step = 1.0 / opts_.child_step;
    const auto hops_to_go = [&](Complex p, double r) {
        return inv_step * std::abs(p - to) / std::max(r, 1e-300);
    };
    arena.push_back({from, 0.9 * d0, 0.0, -1});
    open.push({w * hops_to_go(from, arena[0].radius), order++, 0});
    visited[visit_key(from, arena[0].radius)] = 0.0;

    const int dirs = opts_.directions;
    std::size_t pops = 0;
    while (!open.empty()) {
        if (++pops > opts_.node_budget) break;
        const QueueEntry top = open.top();
        open.pop();
        const BallNode node = arena[top.node];

        if (std::abs(node.center - to) <= 0.9 * node.radius) {
            std::vector<Complex> path;
            for (int i = top.node; i >= 0; i = arena[i].parent)
                path.push_back(arena[i].center);
            std::reverse(path.begin(), path.end());
            path.push_back(to);
            return path;
        }

        for (int j = 0; j < dirs; ++j) {
            const double angle =
                kTwoPi * j / dirs + (node.parent >= 0 ? 0.5 * kTwoPi / dirs : 0.0);
            const Complex child =
                node.center + opts_.child_step * node.radius *
                                  Complex{std::cos(angle), std::sin(angle)};
            const double dc = obstacle_distance(child, forbidden);
            const double floor_here = std::max(
                clearance_floor,
                john_floor *
                    (std::abs(child - forbidden.center) - forbidden.radius));
            if (dc <= floor_here) continue;
            const double rc = 0.9 * dc;
            const std::uint64_t key = visit_key(child, rc);
            const double gc = node.g + 1.0;  // hop pricing
            const auto it = visited.find(key);
            if (it != visited.end() && it->second <= gc) continue;
            visited[key] = gc;
            arena.push_back({child, rc, gc, top.node});
            open.push({gc + w * hops_to_go(child, rc), order++,
                       static_cast<int>(arena.size()) - 1});
        }
    }
    return std::nullopt;
}

namespace {

struct Crossing {
    double theta;          // angle of the crossing point on the circle
    Complex point;
    bool enters_disk;      // boundary passes outside -> inside here
    std::size_t chain;     // chain started (exit) or ended (enter) here
};

struct Chain {
    std::size_t start_crossing;  // exit crossing opening the chain
    std::size_t end_crossing;    // enter crossing closing it
    // boundary span (segment, param) .. (segment, param), in boundary order
    std::size_t seg_begin;
    double t_begin;
    std::size_t seg_end;
    double t_end;
};

struct FaceDecomposition {
    std::vector<Crossing> crossings;
    std::vector<Chain> chains;
    // faces: lists of (chain index, gate arc to the next chain)
    struct Face {
        std::vector<std::size_t> chains;
        std::vector<std::pair<double, double>> gates;  // (theta_lo, theta_hi) CCW
        double winding_of_basepoint = 0.0;
    };
    std::vector<Face> faces;
};

// Winding contribution of the boundary chain around `pole`.
double chain_winding(const Polyline& boundary, const Chain& c, Complex pole) {
    double acc = 0.0;
    const std::size_t nseg = boundary.segment_count();
    std::size_t s = c.seg_begin;
    Complex prev = boundary.segment(s).at(c.t_begin);
    while (true) {
        const Segment seg = boundary.segment(s);
        const bool last = (s == c.seg_end);
        const Complex next = last ? seg.at(c.t_end) : seg.b;
        acc += arg_increment(prev, next, pole);
        prev = next;
        if (last) break;
        s = (s + 1) % nseg;
        if (s == c.seg_begin) break;  // safety
    }
    return acc;
}

// Winding contribution of a CW circle run from angle `from` down to `to`.
double arc_winding_cw(Complex center, double radius, double from, double to,
                      Complex pole) {
    double sweep = from - to;
    while (sweep < 0) sweep += kTwoPi;
    const int steps = std::max(8, static_cast<int>(sweep / 0.05));
    double acc = 0.0;
    Complex prev = center + std::polar(radius, from);
    for (int q = 1; q <= steps; ++q) {
        const Complex next =
            center + std::polar(radius, from - sweep * q / steps);
        acc += arg_increment(prev, next, pole);
        prev = next;
    }
    return acc;
}

FaceDecomposition decompose(const Polyline& boundary, const Disk& b,
                            Complex basepoint) {
    FaceDecomposition out;
    const std::size_t nseg = boundary.segment_count();
    const double eps = boundary.eps_geom();

    // crossing events in boundary order
    struct Event {
        std::size_t seg;
        double t;
        Complex point;
        bool enters;  // outside -> inside
    };
    std::vector<Event> events;
    const auto outside = [&](Complex p) { return std::abs(p - b.center) > b.radius; };
    for (std::size_t s = 0; s < nseg; ++s) {
        const Segment seg = boundary.segment(s);
        double roots[2];
        bool degen = false;
        const int k = circle_segment_intersections(b, seg, roots, &degen, eps);
        if (degen || k == 0) continue;
        const bool a_out = outside(seg.a);
        const bool b_out = outside(seg.b);
        if (k == 1) {
            if (a_out == b_out) continue;  // grazing numerical artifact
            events.push_back({s, roots[0], seg.at(roots[0]), a_out});
        } else {
            if (a_out == b_out) {
                // dips across the circle and back
                events.push_back({s, roots[0], seg.at(roots[0]), a_out});
                events.push_back({s, roots[1], seg.at(roots[1]), !a_out});
            } else {
                // one genuine transition; take the root consistent with it
                const double t = a_out ? roots[0] : roots[1];
                events.push_back({s, t, seg.at(t), a_out});
            }
        }
    }
    if (events.size() < 2) return out;

    // chains run from an exit event to the next (enter) event
    const std::size_t ne = events.size();
    for (std::size_t e = 0; e < ne; ++e) {
        const Event& cur = events[e];
        const Event& nxt = events[(e + 1) % ne];
        if (cur.enters) continue;  // chain starts at an exit event
        Chain c;
        c.seg_begin = cur.seg;
        c.t_begin = cur.t;
        c.seg_end = nxt.seg;
        c.t_end = nxt.t;
        c.start_crossing = e;
        c.end_crossing = (e + 1) % ne;
        out.chains.push_back(c);
    }
    if (out.chains.empty()) return out;

    // crossing records aligned with event indices
    out.crossings.resize(ne);
    for (std::size_t e = 0; e < ne; ++e) {
        out.crossings[e] = {std::arg(events[e].point - b.center),
                            events[e].point, events[e].enters, 0};
    }
    for (std::size_t c = 0; c < out.chains.size(); ++c) {
        out.crossings[out.chains[c].start_crossing].chain = c;
        out.crossings[out.chains[c].end_crossing].chain = c;
    }

    // clockwise-adjacent crossing lookup: sort by theta
    std::vector<std::size_t> by_theta(ne);
    for (std::size_t e = 0; e < ne; ++e) by_theta[e] = e;
    std::sort(by_theta.begin(), by_theta.end(), [&](std::size_t a, std::size_t b2) {
        return out.crossings[a].theta < out.crossings[b2].theta;
    });
    std::vector<std::size_t> rank(ne);
    for (std::size_t r = 0; r < ne; ++r) rank[by_theta[r]] = r;
    const auto cw_prev = [&](std::size_t e) {
        const std::size_t r = rank[e];
        return by_theta[(r + ne - 1) % ne];
    };

    // trace faces
    std::vector<char> chain_used(out.chains.size(), 0);
    for (std::size_t c0 = 0; c0 < out.chains.size(); ++c0) {
        if (chain_used[c0]) continue;
        FaceDecomposition::Face face;
        std::size_t c = c0;
        bool ok = true;
        for (std::size_t guard = 0; guard <= out.chains.size(); ++guard) {
            chain_used[c] = 1;
            face.chains.push_back(c);
            const std::size_t enter = out.chains[c].end_crossing;
            const std::size_t exit = cw_prev(enter);
            if (out.crossings[exit].enters_disk) {
                ok = false;  // tangential degeneracy broke the alternation
                break;
            }
            face.gates.emplace_back(out.crossings[exit].theta,
                                    out.crossings[enter].theta);
            c = out.crossings[exit].chain;
            if (c == c0) break;
            if (guard == out.chains.size()) ok = false;
        }
        if (!ok) continue;
        // winding of the basepoint around this face loop
        double w = 0.0;
        for (std::size_t ci : face.chains)
            w += chain_winding(boundary, out.chains[ci], basepoint);
        for (std::size_t gi = 0; gi < face.gates.size(); ++gi) {
            const auto [lo, hi] = face.gates[gi];
            w += arc_winding_cw(b.center, b.radius, hi, lo, basepoint);
        }
        face.winding_of_basepoint = w;
        out.faces.push_back(std::move(face));
    }
    return out;
}

}  // namespace

TruncatedComponent RotationEngine::truncated_component(Complex z,
                                                       double delta) const {
    if (std::abs(domain_->basepoint - z) <= delta) throw BasepointSwallowed();
    const Disk b(z, delta);
    const Polyline& boundary = domain_->boundary;

    const FaceDecomposition fd = decompose(boundary, b, domain_->basepoint);
    if (fd.faces.empty())
        throw Ineligible("truncated_component: circle does not cross the boundary");

    std::size_t candidates = 0;
    for (const auto& f : fd.faces) candidates += f.gates.size();

    const FaceDecomposition::Face* home = nullptr;
    for (const auto& f : fd.faces) {
        if (std::abs(f.winding_of_basepoint) > kPi) {
            home = &f;
            break;
        }
    }
    if (home == nullptr)
        throw NoPath("truncated_component: no face encloses z0");

    TruncatedComponent comp{b, {}, candidates};
    std::size_t unreachable = 0;
    for (const auto& [lo_raw, hi_raw] : home->gates) {
        double lo = lo_raw, hi = hi_raw;
        while (hi < lo) hi += kTwoPi;
        const double mid = 0.5 * (lo + hi);
        const Complex gate_mid = z + std::polar(delta, mid);
        const double side_clearance = index_->nearest(gate_mid).distance;
        if (side_clearance <= 0.0) {
            ++unreachable;
            continue;
        }
        const double nudge =
            std::clamp(0.45 * side_clearance, delta * 1e-12, delta * 1e-3);
        const Complex target = z + std::polar(delta + nudge, mid);
        const double floor = 0.2 * std::min(nudge, side_clearance);
        const auto path = find_path(target, b, floor);
        if (!path) {
            ++unreachable;
            continue;
        }
        // Branch value at the gate: anchor at arg(z0 - z) in (-pi, pi], track
        // the winding integral along the path, then sweep linearly along the
        // gate arc (arg is exactly linear in the angle on the circle).
        double v = std::arg(domain_->basepoint - z);
        const auto& pts = *path;
        for (std::size_t q = 0; q + 1 < pts.size(); ++q)
            v += arg_increment(pts[q], pts[q + 1], z);
        const double inf_arg = v - (mid - lo);
        comp.gates.push_back({lo, hi, inf_arg});
    }
    if (comp.gates.empty())
        throw NoPath("truncated_component: no gate reachable from z0");
    comp.unreachable_gates = unreachable;
    return comp;
}

RotationValue RotationEngine::rot_point(Complex z, double delta) const {
    const TruncatedComponent comp = truncated_component(z, delta);
    double best = comp.gates.front().log_arg_min;
    for (const GateArc& g : comp.gates) best = std::min(best, g.log_arg_min);
    // a gate the pathfinder could not enter widens the bound by the
    // closed-loop slack
    const double extra = comp.unreachable_gates > 0 ? kTwoPi : 0.0;
    return {best, RotMethod::path_integral, kRotPointErrorBound + extra};
}

RotationValue RotationEngine::rot_disk(const Disk& b) const {
    // eligibility: diam(dOmega cap B) / diam(B) >= 1/4
    std::vector<Complex> inside;
    for (std::uint32_t s : index_->segments_within(b.center, b.radius)) {
        const Segment seg = domain_->boundary.segment(s);
        if (b.contains(seg.a)) inside.push_back(seg.a);
        if (b.contains(seg.b)) inside.push_back(seg.b);
        double roots[2];
        bool degen = false;
        const int k = circle_segment_intersections(b, seg, roots, &degen,
                                                   domain_->boundary.eps_geom());
        for (int q = 0; q < k; ++q) inside.push_back(seg.at(roots[q]));
    }
    if (inside.empty()) throw EmptyIntersection();
    const double ratio = point_set_diameter(inside) / (2.0 * b.radius);
    if (ratio < 0.25) throw Ineligible("rot_disk: diam ratio below 1/4");
    return rot_point(b.center, b.radius);
}

RotationValue RotationEngine::rot_crosscut_at(Complex midpoint,
                                              double diameter) const {
    RotationValue v = rot_point(midpoint, diameter);
    v.additive_error_bound += kRotCrosscutExtraBound;
    return v;
}

RotationValue RotationEngine::rot_crosscut(const Polyline& support_arc) const {
    double total = support_arc.length();
    double acc = 0.0;
    Complex midpoint = support_arc.vertices().front();
    for (std::size_t i = 0; i < support_arc.segment_count(); ++i) {
        const Segment s = support_arc.segment(i);
        const double len = s.length();
        if (acc + len >= 0.5 * total) {
            midpoint = s.at((0.5 * total - acc) / len);
            break;
        }
        acc += len;
    }
    const double diam = point_set_diameter(
        std::span<const Complex>(support_arc.vertices()));
    return rot_crosscut_at(midpoint, diam);
}

RotationValue rot_symbolic(const RepellerSpec& spec, const Word& w) {
    if (!spec.admissible(w)) throw Inadmissible();
    return {spec.angle_sum(w), RotMethod::symbolic, 0.0};
}

MainLemmaProbe main_lemma_probe(const AtlasDomain& domain, const ArcOnCircle& I,
                                std::size_t mesh_vertices, double theta_min) {
    const bool shift = domain.kind() != AtlasKind::disk;
    MainLemmaProbe out{image_arc_probe(domain, I, 256, shift), {}, 0.0, 0.0};
    const JordanDomain jd = domain.boundary_domain(mesh_vertices, theta_min, shift);
    const BoundaryIndex index(jd.boundary);
    const RotationEngine engine(jd, index);
    out.rot = engine.rot_crosscut_at(out.arc.midpoint, out.arc.image_diameter);
    out.log_ratio_hm = std::log(out.arc.proxy_abs_phi_prime) /
                       std::log(out.arc.exact_abs_phi_prime);
    out.ratio_r = out.rot.log_rot / out.arc.exact_arg_phi_prime;
    return out;
}

}  // namespace qdlab
