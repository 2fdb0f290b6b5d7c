#include "qdlab/boundary_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qdlab {

BoundaryIndex::BoundaryIndex(const Polyline& boundary) : boundary_(&boundary) {
    nseg_ = boundary.segment_count();
    arclen_.resize(nseg_ + 1);
    arclen_[0] = 0.0;
    for (std::size_t i = 0; i < nseg_; ++i)
        arclen_[i + 1] = arclen_[i] + boundary.segment(i).length();

    const BoundingBox& box = boundary.bbox();
    const double mean_len = arclen_[nseg_] / static_cast<double>(nseg_);
    // Cell near the mean segment length keeps both occupancy and ring search
    // bounded; clamp the grid to ~16M cells for huge meshes.
    double cell = std::max(mean_len, 1e-12 * box.diameter());
    const double width = std::max(box.xmax - box.xmin, 1e-300);
    const double height = std::max(box.ymax - box.ymin, 1e-300);
    while ((width / cell + 1) * (height / cell + 1) > 16e6) cell *= 2.0;
    cell_ = cell;
    x0_ = box.xmin;
    y0_ = box.ymin;
    nx_ = static_cast<int>(width / cell_) + 2;
    ny_ = static_cast<int>(height / cell_) + 2;

    // CSR fill: count, prefix, place.
    std::vector<std::uint32_t> counts(static_cast<std::size_t>(nx_) * ny_ + 1, 0);
    const auto for_cells = [&](const Segment& s, auto&& fn) {
        int ix0 = static_cast<int>((std::min(s.a.real(), s.b.real()) - x0_) / cell_);
        int ix1 = static_cast<int>((std::max(s.a.real(), s.b.real()) - x0_) / cell_);
        int iy0 = static_cast<int>((std::min(s.a.imag(), s.b.imag()) - y0_) / cell_);
        int iy1 = static_cast<int>((std::max(s.a.imag(), s.b.imag()) - y0_) / cell_);
        ix0 = std::clamp(ix0, 0, nx_ - 1);
        ix1 = std::clamp(ix1, 0, nx_ - 1);
        iy0 = std::clamp(iy0, 0, ny_ - 1);
        iy1 = std::clamp(iy1, 0, ny_ - 1);
        for (int iy = iy0; iy <= iy1; ++iy)
            for (int ix = ix0; ix <= ix1; ++ix) fn(ix, iy);
    };
    for (std::size_t i = 0; i < nseg_; ++i)
        for_cells(boundary.segment(i),
                  [&](int ix, int iy) { ++counts[cell_index(ix, iy) + 1]; });
    for (std::size_t c = 1; c < counts.size(); ++c) counts[c] += counts[c - 1];
    cell_start_ = counts;
    cell_items_.resize(counts.back());
    std::vector<std::uint32_t> cursor(counts.begin(), counts.end() - 1);
    for (std::size_t i = 0; i < nseg_; ++i)
        for_cells(boundary.segment(i), [&](int ix, int iy) {
            cell_items_[cursor[cell_index(ix, iy)]++] = static_cast<std::uint32_t>(i);
        });

    build_field();
}

void BoundaryIndex::build_field() {
    const BoundingBox& box = boundary_->bbox();
    const double width = std::max(box.xmax - box.xmin, 1e-300);
    const double height = std::max(box.ymax - box.ymin, 1e-300);
    const int k = 512;
    fcell_ = std::max(width, height) / k;
    fnx_ = static_cast<int>(width / fcell_) + 2;
    fny_ = static_cast<int>(height / fcell_) + 2;
    field_.assign(static_cast<std::size_t>(fnx_) * fny_, 0xffff);

    // rasterize segments into field cells by parameter stepping
    std::vector<std::pair<int, int>> frontier;
    const auto mark = [&](int ix, int iy) {
        if (ix < 0 || iy < 0 || ix >= fnx_ || iy >= fny_) return;
        auto& v = field_[static_cast<std::size_t>(iy) * fnx_ + ix];
        if (v != 0) {
            v = 0;
            frontier.emplace_back(ix, iy);
        }
    };
    for (std::size_t i = 0; i < nseg_; ++i) {
        const Segment s = boundary_->segment(i);
        const int steps =
            1 + static_cast<int>(std::ceil(s.length() / (0.5 * fcell_)));
        for (int q = 0; q <= steps; ++q) {
            const Complex p = s.at(static_cast<double>(q) / steps);
            mark(static_cast<int>((p.real() - x0_) / fcell_),
                 static_cast<int>((p.imag() - y0_) / fcell_));
        }
    }
    // multi-source BFS, 8-connected (chebyshev distance in cell units)
    std::size_t head = 0;
    while (head < frontier.size()) {
        const auto [ix, iy] = frontier[head++];
        const std::uint16_t d = field_[static_cast<std::size_t>(iy) * fnx_ + ix];
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                const int jx = ix + dx, jy = iy + dy;
                if (jx < 0 || jy < 0 || jx >= fnx_ || jy >= fny_) continue;
                auto& v = field_[static_cast<std::size_t>(jy) * fnx_ + jx];
                if (v > d + 1) {
                    v = d + 1;
                    frontier.emplace_back(jx, jy);
                }
            }
        }
    }
}

double BoundaryIndex::distance_lower_bound(Complex p) const {
    const int ix = static_cast<int>((p.real() - x0_) / fcell_);
    const int iy = static_cast<int>((p.imag() - y0_) / fcell_);
    if (ix < 0 || iy < 0 || ix >= fnx_ || iy >= fny_) return 0.0;
    const std::uint16_t d = field_[static_cast<std::size_t>(iy) * fnx_ + ix];
    if (d <= 2) return 0.0;
    return (static_cast<double>(d) - 2.0) * fcell_;
}

void BoundaryIndex::scan_cell(int ix, int iy, Complex p, NearestHit& best) const {
    if (ix < 0 || iy < 0 || ix >= nx_ || iy >= ny_) return;
    const int c = cell_index(ix, iy);
    for (std::uint32_t k = cell_start_[c]; k < cell_start_[c + 1]; ++k) {
        const std::uint32_t i = cell_items_[k];
        const Segment s = boundary_->segment(i);
        const double t = closest_param(s, p);
        const Complex q = s.at(t);
        const double d = std::abs(p - q);
        if (d < best.distance) best = {d, i, t, q};
    }
}

NearestHit BoundaryIndex::nearest(Complex p) const {
    NearestHit best{std::numeric_limits<double>::infinity(), 0, 0.0, {}};
    const int px = static_cast<int>(std::floor((p.real() - x0_) / cell_));
    const int py = static_cast<int>(std::floor((p.imag() - y0_) / cell_));
    const int max_ring = nx_ + ny_ + 2;
    for (int ring = 0; ring <= max_ring; ++ring) {
        // Once a candidate is certified closer than anything in ring r or
        // beyond, stop. A point in ring r is at least (r-1)*cell away.
        if (best.distance < (ring - 1) * cell_) break;
        if (ring == 0) {
            scan_cell(px, py, p, best);
            continue;
        }
        const int lo_x = px - ring, hi_x = px + ring;
        const int lo_y = py - ring, hi_y = py + ring;
        for (int ix = lo_x; ix <= hi_x; ++ix) {
            scan_cell(ix, lo_y, p, best);
            scan_cell(ix, hi_y, p, best);
        }
        for (int iy = lo_y + 1; iy < hi_y; ++iy) {
            scan_cell(lo_x, iy, p, best);
            scan_cell(hi_x, iy, p, best);
        }
    }
    return best;
}

std::vector<std::uint32_t> BoundaryIndex::segments_within(Complex center,
                                                          double radius) const {
    std::vector<std::uint32_t> out;
    const int ix0 = std::clamp(
        static_cast<int>(std::floor((center.real() - radius - x0_) / cell_)), 0, nx_ - 1);
    const int ix1 = std::clamp(
        static_cast<int>(std::floor((center.real() + radius - x0_) / cell_)), 0, nx_ - 1);
    const int iy0 = std::clamp(
        static_cast<int>(std::floor((center.imag() - radius - y0_) / cell_)), 0, ny_ - 1);
    const int iy1 = std::clamp(
        static_cast<int>(std::floor((center.imag() + radius - y0_) / cell_)), 0, ny_ - 1);
    std::vector<bool> seen(nseg_, false);
    for (int iy = iy0; iy <= iy1; ++iy) {
        for (int ix = ix0; ix <= ix1; ++ix) {
            const int c = cell_index(ix, iy);
            for (std::uint32_t k = cell_start_[c]; k < cell_start_[c + 1]; ++k) {
                const std::uint32_t i = cell_items_[k];
                if (seen[i]) continue;
                seen[i] = true;
                if (segment_distance(boundary_->segment(i), center) <= radius)
                    out.push_back(i);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

Complex BoundaryIndex::point_at_arclength(double s) const {
    const double total = total_length();
    s = std::fmod(s, total);
    if (s < 0) s += total;
    const auto it = std::upper_bound(arclen_.begin(), arclen_.end(), s);
    std::size_t i = static_cast<std::size_t>(it - arclen_.begin());
    i = (i == 0) ? 0 : i - 1;
    if (i >= nseg_) i = nseg_ - 1;
    const Segment seg = boundary_->segment(i);
    const double local = s - arclen_[i];
    const double len = seg.length();
    return seg.at(len > 0 ? local / len : 0.0);
}

}  // namespace qdlab
