#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qdlab/errors.hpp"

namespace qdlab {

using Complex = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

inline double sqr(double x) { return x * x; }
inline double norm2(Complex z) { return z.real() * z.real() + z.imag() * z.imag(); }

struct Segment {
    Complex a;
    Complex b;

    Complex dir() const { return b - a; }
    double length() const { return std::abs(b - a); }
    Complex at(double t) const { return a + t * (b - a); }
};

// Closest point on [a,b] to p, returned as the segment parameter in [0,1].
double closest_param(const Segment& s, Complex p);
double segment_distance(const Segment& s, Complex p);

struct BoundingBox {
    double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
    double diameter() const;
    void expand(Complex p);
};

BoundingBox bounding_box(std::span<const Complex> pts);

// Relative geometric tolerance: kEpsGeomScale * (bounding box diameter).
constexpr double kEpsGeomScale = 1e-12;

// Ordered vertex chain. For a closed chain the first vertex is not repeated;
// segment i of a closed chain with n vertices joins vertex i to (i+1) mod n.
class Polyline {
public:
    enum class Validate { basic, simple };

    Polyline(std::vector<Complex> vertices, bool closed,
             Validate mode = Validate::basic);

    bool closed() const { return closed_; }
    const std::vector<Complex>& vertices() const { return vertices_; }
    std::size_t vertex_count() const { return vertices_.size(); }
    std::size_t segment_count() const {
        return closed_ ? vertices_.size() : vertices_.size() - 1;
    }
    Segment segment(std::size_t i) const {
        return {vertices_[i], vertices_[(i + 1) % vertices_.size()]};
    }
    double eps_geom() const { return eps_geom_; }
    const BoundingBox& bbox() const { return bbox_; }
    double length() const;

    // Distance from p to the chain (linear scan; spatially indexed queries
    // live in BoundaryIndex).
    double distance(Complex p) const;

    // True if no two non-adjacent segments intersect within eps_geom.
    bool is_simple() const;

    Polyline reversed() const;

private:
    std::vector<Complex> vertices_;
    bool closed_;
    double eps_geom_;
    BoundingBox bbox_;
};

struct Disk {
    Complex center;
    double radius;

    Disk(Complex c, double r);
    bool contains(Complex p) const { return std::abs(p - center) <= radius; }
    Disk scaled(double factor) const { return Disk(center, radius * factor); }
};

// Im of the integral of 1/(xi - pole) along the chain, accumulated from exact
// per-segment argument increments. Each increment lies in (-pi, pi); the total
// is additive across concatenation and flips sign under reversal.
double winding_integral(const Polyline& path, Complex pole);
double winding_integral(std::span<const Complex> path, Complex pole);

// Pseudo-hyperbolic distance |(z-w)/(1-conj(z)w)| on the unit disk.
double hyperbolic_rho(Complex z, Complex w);

struct CircleHit {
    Complex point;
    std::size_t segment;   // index into the polyline's segments
    double t;              // parameter on that segment, in [0,1)
    bool degenerate;       // tangential contact within tolerance
};

// All transversal intersections of the circle bounding `disk` with the chain,
// in chain order. Tangential contacts within tolerance are reported with the
// degenerate flag set and should normally be ignored by callers.
std::vector<CircleHit> circle_polyline_intersections(const Disk& disk,
                                                     const Polyline& curve);

// Intersection parameters of a circle with one segment (0, 1 or 2 roots in
// [0,1), plus degeneracy flag). Used by the clipping and measure code.
int circle_segment_intersections(const Disk& disk, const Segment& s,
                                 double roots[2], bool* degenerate,
                                 double eps);

enum class Location { inside, outside, boundary };

// Even-odd/winding classification against a closed simple chain. Points
// within eps_geom of the chain classify as boundary.
Location point_in_jordan(const Polyline& boundary, Complex z);

// Convex hull in counterclockwise order (monotone chain).
std::vector<Complex> convex_hull_points(std::span<const Complex> pts);

// Diameter of a point set (convex hull + rotating calipers).
double point_set_diameter(std::span<const Complex> pts);

// Principal argument increment arg((b-pole)/(a-pole)), in (-pi, pi].
inline double arg_increment(Complex a, Complex b, Complex pole) {
    return std::arg((b - pole) / (a - pole));
}

}  // namespace qdlab
