#pragma once

#include <cstdint>
#include <vector>

#include "qdlab/geometry.hpp"

namespace qdlab {

struct NearestHit {
    double distance;
    std::uint32_t segment;
    double t;        // parameter on the segment
    Complex point;   // closest point
};

// Uniform-grid spatial index over the segments of one closed boundary chain.
// nearest() returns the true global minimum: the ring search only stops once
// the best candidate distance is certified against the unexplored rings.
class BoundaryIndex {
public:
    explicit BoundaryIndex(const Polyline& boundary);

    const Polyline& boundary() const { return *boundary_; }
    std::size_t segment_count() const { return nseg_; }

    NearestHit nearest(Complex p) const;

    // Conservative lower bound on the distance from p to the boundary, from
    // a coarse chamfer field. Zero near the boundary; walk-on-spheres uses it
    // to take large interior jumps without exact queries.
    double distance_lower_bound(Complex p) const;
    double coarse_cell() const { return fcell_; }

    // Segments whose distance to `center` is at most `radius`.
    std::vector<std::uint32_t> segments_within(Complex center, double radius) const;

    // Arclength of the chain start up to vertex i.
    double arclength_at_vertex(std::size_t i) const { return arclen_[i]; }
    double total_length() const { return arclen_[nseg_]; }

    // Point at a given arclength along the chain.
    Complex point_at_arclength(double s) const;

private:
    const Polyline* boundary_;
    std::size_t nseg_;
    double cell_;
    double x0_, y0_;
    int nx_, ny_;
    std::vector<std::uint32_t> cell_start_;  // CSR layout
    std::vector<std::uint32_t> cell_items_;
    std::vector<double> arclen_;

    // coarse chamfer field (chebyshev cell distance to boundary cells)
    double fcell_ = 0;
    int fnx_ = 0, fny_ = 0;
    std::vector<std::uint16_t> field_;

    int cell_index(int ix, int iy) const { return iy * nx_ + ix; }
    void scan_cell(int ix, int iy, Complex p, NearestHit& best) const;
    void build_field();
};

}  // namespace qdlab
