#include "qdlab/harmonic.hpp"

#include <algorithm>
#include <cmath>

#include "qdlab/parallel.hpp"

namespace qdlab {

WosHit wos_walk(const BoundaryIndex& index, Complex z0, double eps_hit,
                CounterRng& rng, std::size_t max_steps) {
    Complex z = z0;
    for (std::size_t step = 0; step < max_steps; ++step) {
        const double coarse = index.distance_lower_bound(z);
        double radius;
        std::optional<NearestHit> hit;
        if (coarse > 4.0 * eps_hit) {
            radius = coarse;
        } else {
            hit = index.nearest(z);
            if (hit->distance < eps_hit)
                return {hit->segment, hit->point, static_cast<std::uint32_t>(step)};
            radius = hit->distance;
        }
        z += radius * rng.next_unit_vector();
    }
    throw MaxStepsExceeded();
}

WalkBatch::WalkBatch(const BoundaryIndex& index, Complex z0, std::uint64_t walks,
                     const WalkConfig& cfg)
    : walks_(walks), seed_(cfg.seed) {
    const std::size_t nseg = index.segment_count();
    const unsigned nthreads = effective_threads(cfg.threads);

    std::vector<std::vector<std::uint64_t>> local_hits(
        nthreads, std::vector<std::uint64_t>(nseg, 0));
    std::vector<std::vector<HitPoint>> local_points(nthreads);

    parallel_chunks(walks, nthreads,
                    [&](std::size_t lo, std::size_t hi, unsigned chunk) {
                        auto& hits = local_hits[chunk];
                        auto& pts = local_points[chunk];
                        if (cfg.record_points) pts.reserve(hi - lo);
                        for (std::size_t i = lo; i < hi; ++i) {
                            CounterRng rng(cfg.seed, i);
                            const WosHit h = wos_walk(index, z0, cfg.eps_hit, rng,
                                                      cfg.max_steps);
                            ++hits[h.segment];
                            if (cfg.record_points)
                                pts.push_back({h.point.real(), h.point.imag(),
                                               h.segment});
                        }
                    });

    hits_.assign(nseg, 0);
    for (const auto& h : local_hits)
        for (std::size_t s = 0; s < nseg; ++s) hits_[s] += h[s];
    if (cfg.record_points) {
        std::size_t total = 0;
        for (const auto& p : local_points) total += p.size();
        points_.reserve(total);
        for (auto& p : local_points)
            points_.insert(points_.end(), p.begin(), p.end());
    }
    cum_.resize(nseg + 1);
    cum_[0] = 0;
    for (std::size_t s = 0; s < nseg; ++s) cum_[s + 1] = cum_[s] + hits_[s];
}

MeasureEstimate WalkBatch::from_hits(std::uint64_t h) const {
    MeasureEstimate e;
    e.hits = h;
    e.walks = walks_;
    e.rng_seed = seed_;
    e.value = static_cast<double>(h) / static_cast<double>(walks_);
    e.std_error = std::sqrt(std::max(e.value * (1.0 - e.value), 0.0) /
                            static_cast<double>(walks_));
    return e;
}

MeasureEstimate WalkBatch::measure_range(std::uint32_t first,
                                         std::uint32_t last) const {
    const std::size_t n = hits_.size();
    std::uint64_t h = 0;
    if (first <= last) {
        h = cum_[last] - cum_[first];
    } else {
        h = (cum_[n] - cum_[first]) + cum_[last];
    }
    return from_hits(h);
}

MeasureEstimate WalkBatch::measure_set(
    std::span<const std::uint32_t> segments) const {
    std::uint64_t h = 0;
    for (std::uint32_t s : segments) h += hits_[s];
    return from_hits(h);
}

HitPointGrid::HitPointGrid(const WalkBatch& batch, const BoundingBox& box)
    : batch_(&batch) {
    const auto& pts = batch.points();
    const double width = std::max(box.xmax - box.xmin, 1e-300);
    const double height = std::max(box.ymax - box.ymin, 1e-300);
    const std::size_t target_cells =
        std::clamp<std::size_t>(pts.size(), 1024, 4u << 20);
    cell_ = std::sqrt(width * height / static_cast<double>(target_cells));
    x0_ = box.xmin;
    y0_ = box.ymin;
    nx_ = static_cast<int>(width / cell_) + 2;
    ny_ = static_cast<int>(height / cell_) + 2;
    std::vector<std::uint32_t> counts(static_cast<std::size_t>(nx_) * ny_ + 1, 0);
    const auto cell_of = [&](const HitPoint& p) {
        int ix = std::clamp(static_cast<int>((p.x - x0_) / cell_), 0, nx_ - 1);
        int iy = std::clamp(static_cast<int>((p.y - y0_) / cell_), 0, ny_ - 1);
        return static_cast<std::size_t>(iy) * nx_ + ix;
    };
    for (const auto& p : pts) ++counts[cell_of(p) + 1];
    for (std::size_t c = 1; c < counts.size(); ++c) counts[c] += counts[c - 1];
    start_ = counts;
    items_.resize(pts.size());
    std::vector<std::uint32_t> cursor(counts.begin(), counts.end() - 1);
    for (std::uint32_t i = 0; i < pts.size(); ++i)
        items_[cursor[cell_of(pts[i])]++] = i;
}

std::uint64_t HitPointGrid::count_in_disk(const Disk& b) const {
    const auto& pts = batch_->points();
    const double r2 = b.radius * b.radius;
    std::uint64_t count = 0;
    const int ix0 = std::clamp(
        static_cast<int>((b.center.real() - b.radius - x0_) / cell_), 0, nx_ - 1);
    const int ix1 = std::clamp(
        static_cast<int>((b.center.real() + b.radius - x0_) / cell_), 0, nx_ - 1);
    const int iy0 = std::clamp(
        static_cast<int>((b.center.imag() - b.radius - y0_) / cell_), 0, ny_ - 1);
    const int iy1 = std::clamp(
        static_cast<int>((b.center.imag() + b.radius - y0_) / cell_), 0, ny_ - 1);
    for (int iy = iy0; iy <= iy1; ++iy) {
        for (int ix = ix0; ix <= ix1; ++ix) {
            const std::size_t c = static_cast<std::size_t>(iy) * nx_ + ix;
            for (std::uint32_t k = start_[c]; k < start_[c + 1]; ++k) {
                const HitPoint& p = pts[items_[k]];
                const double dx = p.x - b.center.real();
                const double dy = p.y - b.center.imag();
                if (dx * dx + dy * dy <= r2) ++count;
            }
        }
    }
    return count;
}

MeasureEstimate HitPointGrid::measure_of_disk(const BoundaryIndex& index,
                                              const Disk& b) const {
    if (index.segments_within(b.center, b.radius).empty())
        throw EmptyIntersection();
    return batch_->from_hits(count_in_disk(b));
}

MeasureEstimate measure_of_disk(const BoundaryIndex& index,
                                const WalkBatch& batch, const HitPointGrid& grid,
                                const Disk& b) {
    (void)batch;
    return grid.measure_of_disk(index, b);
}

namespace {

// Maximal cyclic runs of consecutive segment ids.
std::vector<std::pair<std::uint32_t, std::uint32_t>> segment_runs(
    const std::vector<std::uint32_t>& sorted, std::size_t nseg) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> runs;
    if (sorted.empty()) return runs;
    std::uint32_t run_start = sorted[0];
    std::uint32_t prev = sorted[0];
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i] != prev + 1) {
            runs.emplace_back(run_start, prev + 1);
            run_start = sorted[i];
        }
        prev = sorted[i];
    }
    runs.emplace_back(run_start, prev + 1);
    // merge a wrap-around pair
    if (runs.size() > 1 && runs.front().first == 0 &&
        runs.back().second == nseg) {
        runs.front().first = runs.back().first;
        runs.pop_back();
    }
    return runs;
}

}  // namespace

RepresentativeArc representative_arc(const BoundaryIndex& index,
                                     const WalkBatch& batch,
                                     const HitPointGrid& grid, const Disk& b) {
    const MeasureEstimate wb = grid.measure_of_disk(index, b);
    if (wb.value <= 0.0) throw NotFound("representative_arc: omega(B) = 0");
    if (wb.std_error > wb.value / 10.0)
        throw InsufficientHits("representative_arc: omega(B) needs se < value/10");
    const double upper = wb.value;
    const double l = std::log(1.0 / wb.value);
    const double lower = wb.value / std::max(l * l, 1.0 + 1e-9);

    // Segments fully inside 2B, grouped into connected sub-arcs.
    const Disk twob = b.scaled(2.0);
    std::vector<std::uint32_t> inside;
    for (std::uint32_t s : index.segments_within(twob.center, twob.radius)) {
        const Segment seg = index.boundary().segment(s);
        if (twob.contains(seg.a) && twob.contains(seg.b)) inside.push_back(s);
    }
    const std::size_t nseg = index.segment_count();
    for (auto [first, last] : segment_runs(inside, nseg)) {
        // cyclic range [first, last)
        MeasureEstimate m = batch.measure_range(first, last);
        std::uint32_t lo = first, hi = last;
        // trim greedily from the end with fewer hits until inside the window
        while (m.value >= upper && lo != hi) {
            const std::uint64_t h_lo = batch.segment_hits()[lo % nseg];
            const std::uint64_t h_hi =
                batch.segment_hits()[(hi + nseg - 1) % nseg];
            if (h_lo >= h_hi) {
                hi = (hi + nseg - 1) % nseg;
            } else {
                lo = (lo + 1) % nseg;
            }
            if (lo == hi) break;
            m = batch.measure_range(lo, hi);
        }
        if (m.value > lower && m.value < upper && lo != hi)
            return {lo, hi, m};
    }
    throw NotFound("representative_arc: no component fits the window");
}

namespace {

// Extend an arc from a starting vertex until its diameter reaches `target`.
// Returns the segment range [start, end) and the achieved diameter.
struct GrownArc {
    std::uint32_t first, last;
    double diameter;
};

std::optional<GrownArc> grow_arc(const Polyline& boundary, std::uint32_t start,
                                 double target) {
    const std::size_t n = boundary.segment_count();
    std::vector<Complex> pts{boundary.segment(start).a};
    double diam = 0.0;
    std::uint32_t s = start;
    for (std::size_t used = 0; used < n / 2; ++used) {
        const Complex next = boundary.segment(s).b;
        for (const Complex& p : pts) diam = std::max(diam, std::abs(next - p));
        pts.push_back(next);
        s = static_cast<std::uint32_t>((s + 1) % n);
        if (diam >= target) return GrownArc{start, s, diam};
    }
    return std::nullopt;
}

}  // namespace

DoublingReport doubling_check(const BoundaryIndex& index, const WalkBatch& batch,
                              const HitPointGrid& grid, std::size_t trials,
                              std::uint64_t seed) {
    if (trials < 50) throw Error("doubling_check: need >= 50 trials");
    DoublingReport rep;
    const Polyline& boundary = index.boundary();
    const double diam = boundary.bbox().diameter();
    const std::size_t nseg = index.segment_count();
    const std::uint64_t min_hits = 32;

    for (std::size_t t = 0; t < trials; ++t) {
        CounterRng rng(seed, t);
        const Complex center =
            index.point_at_arclength(rng.next_double() * index.total_length());
        const int scale_pow = 4 + static_cast<int>(rng.next_below(4));
        const double radius = diam / static_cast<double>(1 << scale_pow);
        const Disk b(center, radius);
        const std::uint64_t h1 = grid.count_in_disk(b);
        const std::uint64_t h2 = grid.count_in_disk(b.scaled(2.0));
        if (h1 >= min_hits) {
            rep.c_disk = std::max(
                rep.c_disk, static_cast<double>(h2) / static_cast<double>(h1));
            ++rep.disk_trials;
        }
        // adjacent arc pair of equal target diameter
        const std::uint32_t start = static_cast<std::uint32_t>(rng.next_below(nseg));
        const auto i_arc = grow_arc(boundary, start, radius);
        if (!i_arc) continue;
        const auto j_arc = grow_arc(boundary, i_arc->last, radius);
        if (!j_arc) continue;
        const MeasureEstimate mi = batch.measure_range(i_arc->first, i_arc->last);
        const MeasureEstimate mj = batch.measure_range(j_arc->first, j_arc->last);
        if (mi.hits < min_hits || mj.hits < min_hits) continue;
        // orient so diam(I) <= diam(J)
        const double ratio = i_arc->diameter <= j_arc->diameter
                                 ? mi.value / mj.value
                                 : mj.value / mi.value;
        rep.c_arc = std::max(rep.c_arc, ratio);
        ++rep.arc_trials;
    }
    return rep;
}

}  // namespace qdlab
