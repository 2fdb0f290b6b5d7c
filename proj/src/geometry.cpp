#include "qdlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace qdlab {

double closest_param(const Segment& s, Complex p) {
    const Complex d = s.b - s.a;
    const double dd = norm2(d);
    if (dd == 0.0) return 0.0;
    const double t = ((p.real() - s.a.real()) * d.real() +
                      (p.imag() - s.a.imag()) * d.imag()) /
                     dd;
    return std::clamp(t, 0.0, 1.0);
}

double segment_distance(const Segment& s, Complex p) {
    return std::abs(p - s.at(closest_param(s, p)));
}

double BoundingBox::diameter() const {
    return std::hypot(xmax - xmin, ymax - ymin);
}

void BoundingBox::expand(Complex p) {
    xmin = std::min(xmin, p.real());
    xmax = std::max(xmax, p.real());
    ymin = std::min(ymin, p.imag());
    ymax = std::max(ymax, p.imag());
}

BoundingBox bounding_box(std::span<const Complex> pts) {
    BoundingBox box;
    if (pts.empty()) return box;
    box.xmin = box.xmax = pts[0].real();
    box.ymin = box.ymax = pts[0].imag();
    for (Complex p : pts) box.expand(p);
    return box;
}

Polyline::Polyline(std::vector<Complex> vertices, bool closed, Validate mode)
    : vertices_(std::move(vertices)), closed_(closed) {
    if (vertices_.size() < 2) throw Error("Polyline: need at least 2 vertices");
    for (Complex v : vertices_) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw Error("Polyline: non-finite vertex");
    }
    bbox_ = bounding_box(vertices_);
    eps_geom_ = kEpsGeomScale * bbox_.diameter();
    const std::size_t n = segment_count();
    // Exact-zero check only: graded meshes legitimately carry segments far
    // below the global tolerance.
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(segment(i).dir()) == 0.0)
            throw Error("Polyline: consecutive vertices coincide");
    }
    if (mode == Validate::simple && closed_ && !is_simple())
        throw NotSimple();
}

double Polyline::length() const {
    double acc = 0.0;
    for (std::size_t i = 0; i < segment_count(); ++i)
        acc += segment(i).length();
    return acc;
}

double Polyline::distance(Complex p) const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < segment_count(); ++i)
        best = std::min(best, segment_distance(segment(i), p));
    return best;
}

namespace {

bool proper_intersect(const Segment& s1, const Segment& s2, double eps) {
    const auto orient = [](Complex a, Complex b, Complex c) {
        return (b.real() - a.real()) * (c.imag() - a.imag()) -
               (b.imag() - a.imag()) * (c.real() - a.real());
    };
    const double d1 = orient(s2.a, s2.b, s1.a);
    const double d2 = orient(s2.a, s2.b, s1.b);
    const double d3 = orient(s1.a, s1.b, s2.a);
    const double d4 = orient(s1.a, s1.b, s2.b);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
        ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
        return true;
    // Near-degenerate contact: treat touching within eps as intersection.
    if (segment_distance(s2, s1.a) <= eps || segment_distance(s2, s1.b) <= eps ||
        segment_distance(s1, s2.a) <= eps || segment_distance(s1, s2.b) <= eps)
        return true;
    return false;
}

}  // namespace

bool Polyline::is_simple() const {
    // Uniform grid over segment bounding boxes; prefractal segments are near
    // uniform in length so occupancy stays balanced.
    const std::size_t n = segment_count();
    if (n < 3) return true;
    double mean_len = length() / static_cast<double>(n);
    const double cell = std::max(mean_len, bbox_.diameter() * 1e-9);
    const auto key = [&](long ix, long iy) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(ix)) << 32) |
               static_cast<std::uint32_t>(iy);
    };
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> grid;
    grid.reserve(n * 2);
    const auto cells_of = [&](const Segment& s, auto&& fn) {
        const long x0 = static_cast<long>(std::floor(std::min(s.a.real(), s.b.real()) / cell));
        const long x1 = static_cast<long>(std::floor(std::max(s.a.real(), s.b.real()) / cell));
        const long y0 = static_cast<long>(std::floor(std::min(s.a.imag(), s.b.imag()) / cell));
        const long y1 = static_cast<long>(std::floor(std::max(s.a.imag(), s.b.imag()) / cell));
        for (long ix = x0; ix <= x1; ++ix)
            for (long iy = y0; iy <= y1; ++iy) fn(ix, iy);
    };
    for (std::uint32_t i = 0; i < n; ++i) {
        const Segment si = segment(i);
        bool bad = false;
        cells_of(si, [&](long ix, long iy) {
            if (bad) return;
            for (std::uint32_t j : grid[key(ix, iy)]) {
                const bool adjacent =
                    (i == (j + 1) % n) || (j == (i + 1) % n) ||
                    (!closed_ && (i + 1 == j || j + 1 == i));
                if (adjacent || i == j) continue;
                const Segment sj = segment(j);
                // contact tolerance scaled to the local feature size so
                // graded meshes are not flagged near their fine end
                const double eps = std::min(
                    eps_geom_, 0.1 * std::min(si.length(), sj.length()));
                if (proper_intersect(si, sj, eps)) {
                    bad = true;
                    return;
                }
            }
        });
        if (bad) return false;
        cells_of(si, [&](long ix, long iy) {
            auto& bucket = grid[key(ix, iy)];
            if (bucket.empty() || bucket.back() != i) bucket.push_back(i);
        });
    }
    return true;
}

Polyline Polyline::reversed() const {
    std::vector<Complex> v(vertices_.rbegin(), vertices_.rend());
    return Polyline(std::move(v), closed_);
}

Disk::Disk(Complex c, double r) : center(c), radius(r) {
    if (!(r > 0.0)) throw Error("Disk: radius must be positive");
}

double winding_integral(std::span<const Complex> path, Complex pole) {
    if (path.size() < 2) throw Error("winding_integral: empty path");
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        if (segment_distance({path[i], path[i + 1]}, pole) == 0.0)
            throw PoleOnPath();
        acc += arg_increment(path[i], path[i + 1], pole);
    }
    return acc;
}

double winding_integral(const Polyline& path, Complex pole) {
    if (path.distance(pole) <= path.eps_geom()) throw PoleOnPath();
    double acc = 0.0;
    for (std::size_t i = 0; i < path.segment_count(); ++i) {
        const Segment s = path.segment(i);
        acc += arg_increment(s.a, s.b, pole);
    }
    return acc;
}

double hyperbolic_rho(Complex z, Complex w) {
    if (std::abs(z) >= 1.0 || std::abs(w) >= 1.0) throw OutsideDisk();
    return std::abs((z - w) / (1.0 - std::conj(z) * w));
}

int circle_segment_intersections(const Disk& disk, const Segment& s,
                                 double roots[2], bool* degenerate,
                                 double eps) {
    if (degenerate) *degenerate = false;
    const Complex d = s.b - s.a;
    const Complex m = s.a - disk.center;
    const double A = norm2(d);
    if (A == 0.0) return 0;
    const double B = 2.0 * (m.real() * d.real() + m.imag() * d.imag());
    const double C = norm2(m) - disk.radius * disk.radius;
    double disc = B * B - 4.0 * A * C;
    // Tangency window: |closest approach - radius| within eps.
    const double closest = segment_distance(s, disk.center);
    if (std::abs(closest - disk.radius) <= eps && disc < eps * eps * A) {
        if (degenerate) *degenerate = true;
        return 0;
    }
    if (disc <= 0.0) return 0;
    const double sq = std::sqrt(disc);
    // Stable quadratic roots.
    const double q = -0.5 * (B + (B >= 0 ? sq : -sq));
    double t0 = q / A;
    double t1 = (q != 0.0) ? C / q : t0;
    if (t0 > t1) std::swap(t0, t1);
    int count = 0;
    for (double t : {t0, t1}) {
        if (t >= 0.0 && t < 1.0) roots[count++] = t;
    }
    return count;
}

std::vector<CircleHit> circle_polyline_intersections(const Disk& disk,
                                                     const Polyline& curve) {
    std::vector<CircleHit> hits;
    const double eps = curve.eps_geom();
    for (std::size_t i = 0; i < curve.segment_count(); ++i) {
        const Segment s = curve.segment(i);
        // Cheap reject: segment bbox vs circle annulus.
        const double dmin = segment_distance(s, disk.center);
        const double dmax = std::max(std::abs(s.a - disk.center),
                                     std::abs(s.b - disk.center));
        if (dmin > disk.radius || dmax < disk.radius) {
            if (std::abs(dmin - disk.radius) > eps && std::abs(dmax - disk.radius) > eps)
                continue;
        }
        double roots[2];
        bool degen = false;
        const int k = circle_segment_intersections(disk, s, roots, &degen, eps);
        if (degen) {
            hits.push_back({s.at(closest_param(s, disk.center)), i,
                            closest_param(s, disk.center), true});
            continue;
        }
        for (int r = 0; r < k; ++r)
            hits.push_back({s.at(roots[r]), i, roots[r], false});
    }
    return hits;
}

Location point_in_jordan(const Polyline& boundary, Complex z) {
    if (!boundary.closed()) throw Error("point_in_jordan: boundary must be closed");
    if (boundary.distance(z) <= boundary.eps_geom()) return Location::boundary;
    // Winding number by signed crossings of the upward/downward edges.
    int winding = 0;
    const auto& v = boundary.vertices();
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Complex a = v[i];
        const Complex b = v[(i + 1) % n];
        const auto is_left = [&](Complex p0, Complex p1, Complex p2) {
            return (p1.real() - p0.real()) * (p2.imag() - p0.imag()) -
                   (p2.real() - p0.real()) * (p1.imag() - p0.imag());
        };
        if (a.imag() <= z.imag()) {
            if (b.imag() > z.imag() && is_left(a, b, z) > 0) ++winding;
        } else {
            if (b.imag() <= z.imag() && is_left(a, b, z) < 0) --winding;
        }
    }
    return winding != 0 ? Location::inside : Location::outside;
}

std::vector<Complex> convex_hull_points(std::span<const Complex> pts_in) {
    std::vector<Complex> pts(pts_in.begin(), pts_in.end());
    std::sort(pts.begin(), pts.end(), [](Complex a, Complex b) {
        return a.real() < b.real() ||
               (a.real() == b.real() && a.imag() < b.imag());
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const std::size_t n = pts.size();
    if (n < 3) return pts;
    const auto cross = [](Complex o, Complex a, Complex b) {
        return (a.real() - o.real()) * (b.imag() - o.imag()) -
               (a.imag() - o.imag()) * (b.real() - o.real());
    };
    std::vector<Complex> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = n - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

double point_set_diameter(std::span<const Complex> pts) {
    if (pts.size() < 2) return 0.0;
    std::vector<Complex> hull = convex_hull_points(pts);
    const std::size_t m = hull.size();
    if (m == 1) return 0.0;
    if (m == 2) return std::abs(hull[0] - hull[1]);
    double best = 0.0;
    std::size_t j = 1;
    const auto area2 = [&](std::size_t a, std::size_t b, Complex c) {
        return std::abs((hull[b].real() - hull[a].real()) * (c.imag() - hull[a].imag()) -
                        (hull[b].imag() - hull[a].imag()) * (c.real() - hull[a].real()));
    };
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t ni = (i + 1) % m;
        while (area2(i, ni, hull[(j + 1) % m]) > area2(i, ni, hull[j]))
            j = (j + 1) % m;
        best = std::max(best, std::abs(hull[i] - hull[j]));
        best = std::max(best, std::abs(hull[ni] - hull[j]));
    }
    return best;
}

}  // namespace qdlab
