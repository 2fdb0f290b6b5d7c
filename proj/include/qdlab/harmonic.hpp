#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qdlab/boundary_index.hpp"
#include "qdlab/repeller.hpp"
#include "qdlab/rng.hpp"

namespace qdlab {

struct WalkConfig {
    double eps_hit;
    std::size_t max_steps = 100000;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    bool record_points = false;
};

struct MeasureEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t hits = 0;
    std::uint64_t walks = 0;
    std::uint64_t rng_seed = 0;
};

struct WosHit {
    std::uint32_t segment;
    Complex point;
    std::uint32_t steps;
};

// One Brownian walk realized by walk-on-spheres, deterministic given the
// stream. Throws MaxStepsExceeded on tolerance misconfiguration.
WosHit wos_walk(const BoundaryIndex& index, Complex z0, double eps_hit,
                CounterRng& rng, std::size_t max_steps = 100000);

struct HitPoint {
    double x, y;
    std::uint32_t segment;
};

// A batch of walks from one basepoint: per-segment hit histogram, optional
// hit point store, and measure queries. Walk i draws from stream (seed, i),
// so the batch is reproducible and thread-count independent.
class WalkBatch {
public:
    WalkBatch(const BoundaryIndex& index, Complex z0, std::uint64_t walks,
              const WalkConfig& cfg);

    std::uint64_t walks() const { return walks_; }
    std::uint64_t seed() const { return seed_; }
    const std::vector<std::uint64_t>& segment_hits() const { return hits_; }
    const std::vector<HitPoint>& points() const { return points_; }

    // Measure of the cyclic segment-id range [first, last).
    MeasureEstimate measure_range(std::uint32_t first, std::uint32_t last) const;
    MeasureEstimate measure_set(std::span<const std::uint32_t> segments) const;
    MeasureEstimate from_hits(std::uint64_t h) const;

private:
    std::uint64_t walks_;
    std::uint64_t seed_;
    std::vector<std::uint64_t> hits_;
    std::vector<std::uint64_t> cum_;  // prefix sums of hits_
    std::vector<HitPoint> points_;
};

// Count structure over recorded hit points for disk measures.
class HitPointGrid {
public:
    HitPointGrid(const WalkBatch& batch, const BoundingBox& box);
    std::uint64_t count_in_disk(const Disk& b) const;
    MeasureEstimate measure_of_disk(const BoundaryIndex& index, const Disk& b) const;

private:
    const WalkBatch* batch_;
    double cell_, x0_, y0_;
    int nx_, ny_;
    std::vector<std::uint32_t> start_;
    std::vector<std::uint32_t> items_;
};

// omega(B cap dOmega) from a dedicated point-recording batch.
// Throws EmptyIntersection when B misses the boundary.
MeasureEstimate measure_of_disk(const BoundaryIndex& index, const WalkBatch& batch,
                                const HitPointGrid& grid, const Disk& b);

struct RepresentativeArc {
    std::uint32_t first;  // boundary segment range [first, last), cyclic
    std::uint32_t last;
    MeasureEstimate measure;
};

// Connected boundary sub-arc inside 2B whose measure falls in Carleson's
// window (omega(B)/log^2(1/omega(B)), omega(B)). Throws NotFound.
RepresentativeArc representative_arc(const BoundaryIndex& index,
                                     const WalkBatch& batch,
                                     const HitPointGrid& grid, const Disk& b);

struct DoublingReport {
    double c_disk = 0.0;  // max omega(2B)/omega(B)
    double c_arc = 0.0;   // max omega(I)/omega(J), diam(I) <= diam(J), adjacent
    std::size_t disk_trials = 0;
    std::size_t arc_trials = 0;
};

DoublingReport doubling_check(const BoundaryIndex& index, const WalkBatch& batch,
                              const HitPointGrid& grid, std::size_t trials,
                              std::uint64_t seed);

// Default hit tolerance: 1e-3 times the given feature size (minimum cylinder
// diameter at the working depth for repellers).
inline double default_eps_hit(double feature_size) { return 1e-3 * feature_size; }

}  // namespace qdlab
