#pragma once

#include <optional>
#include <vector>

#include "qdlab/atlas.hpp"
#include "qdlab/boundary_index.hpp"
#include "qdlab/repeller.hpp"

namespace qdlab {

enum class RotMethod { path_integral, symbolic, boundary_tracking };

struct RotationValue {
    double log_rot = 0.0;
    RotMethod method = RotMethod::path_integral;
    double additive_error_bound = 0.0;
};

// Method error budgets attached to every geometric value: 3pi from the
// integral-to-rotation lemma plus pi of discretization slack, and a further
// 10pi when a crosscut is reduced to a point rotation.
constexpr double kRotPointErrorBound = 4.0 * kPi;
constexpr double kRotCrosscutExtraBound = 10.0 * kPi;

struct GateArc {
    double theta_lo;  // CCW arc (theta_lo, theta_hi) of dB(z, delta), inside
    double theta_hi;  // Omega and reachable from z0 in Omega minus the disk
    double log_arg_min;  // branch-tracked inf of arg(y - z) over the arc
};

struct TruncatedComponent {
    Disk disk;
    std::vector<GateArc> gates;
    std::size_t candidate_gates = 0;   // circle arcs inside Omega (any face)
    std::size_t unreachable_gates = 0; // component gates the pathfinder missed
};

struct RotOptions {
    std::size_t node_budget = 200000;
    int directions = 16;
    double child_step = 0.8;
    // Any path in the component gives the same integral, so the search is
    // greedy: cost = hop count, heuristic = estimated hops to go. Hop pricing
    // keeps the frontier on fat balls instead of wall-crawling.
    double heuristic_weight = 2.0;
    // Cone floor: far from the disk the path may not squeeze below this
    // fraction of its distance to the disk (John-domain style). A failed
    // search retries once without it.
    double john_floor = 0.005;
};

// Rotation queries against one Jordan domain. Pure and thread-safe; each
// query uses local scratch only.
class RotationEngine {
public:
    RotationEngine(const JordanDomain& domain, const BoundaryIndex& index,
                   RotOptions opts = {});

    const JordanDomain& domain() const { return *domain_; }

    TruncatedComponent truncated_component(Complex z, double delta) const;

    // rot(z, delta) via winding integrals along found paths; branch anchored
    // at arg(z0 - z) in (-pi, pi].
    RotationValue rot_point(Complex z, double delta) const;

    // Disk rotation; eligible when diam(dOmega cap B) / diam(B) >= 1/4.
    RotationValue rot_disk(const Disk& b) const;

    // Crosscut rotation through the support arc: rot_point at the arc's
    // arclength midpoint with radius = arc diameter.
    RotationValue rot_crosscut(const Polyline& support_arc) const;
    RotationValue rot_crosscut_at(Complex midpoint, double diameter) const;

    // Path from z0 to `to` through Omega minus the forbidden disk, as a chain
    // of inscribed-ball centers (A* over balls; adaptive to local clearance).
    std::optional<std::vector<Complex>> find_path(Complex to,
                                                  const Disk& forbidden,
                                                  double clearance_floor) const;

private:
    const JordanDomain* domain_;
    const BoundaryIndex* index_;
    RotOptions opts_;

    double obstacle_distance(Complex p, const Disk& forbidden) const;
    std::optional<std::vector<Complex>> find_path_once(Complex to,
                                                       const Disk& forbidden,
                                                       double clearance_floor,
                                                       double john_floor) const;
};

// Exact symbolic rotation of a word: the sum of its letter angles
// (renormalized; the base arc contributes nothing).
RotationValue rot_symbolic(const RepellerSpec& spec, const Word& w);

struct MainLemmaProbe {
    ImageArcProbe arc;
    RotationValue rot;  // geometric rotation of the image arc
    double log_ratio_hm;  // log(proxy)/log(exact |phi'|)
    double ratio_r;       // log rot / arg phi'(z_I)
};

// Full Main Lemma probe on an atlas domain: analytic values, image-arc proxy,
// and the geometric rotation measured on a graded (tip-shifted) mesh.
MainLemmaProbe main_lemma_probe(const AtlasDomain& domain, const ArcOnCircle& I,
                                std::size_t mesh_vertices = std::size_t{1} << 14,
                                double theta_min = 0x1p-30);

}  // namespace qdlab
