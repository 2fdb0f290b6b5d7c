#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qdlab/geometry.hpp"
#include "qdlab/rng.hpp"

using namespace qdlab;

namespace {

Polyline circle_polyline(Complex center, double radius, std::size_t n) {
    std::vector<Complex> v;
    v.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        v.push_back(center + std::polar(radius, kTwoPi * i / n));
    return Polyline(std::move(v), true);
}

Polyline unit_square() {
    return Polyline({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, true);
}

// independent O(n) intersection oracle: plain quadratic per segment, no
// prefiltering
std::size_t brute_circle_hits(const Disk& d, const Polyline& curve) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < curve.segment_count(); ++i) {
        const Segment s = curve.segment(i);
        const Complex m = s.a - d.center;
        const Complex dd = s.b - s.a;
        const double A = norm2(dd);
        const double B = 2 * (m.real() * dd.real() + m.imag() * dd.imag());
        const double C = norm2(m) - d.radius * d.radius;
        const double disc = B * B - 4 * A * C;
        if (disc <= 0) continue;
        for (double sgn : {-1.0, 1.0}) {
            const double t = (-B + sgn * std::sqrt(disc)) / (2 * A);
            if (t >= 0.0 && t < 1.0) ++count;
        }
    }
    return count;
}

std::vector<Complex> koch_arc(int gen) {
    std::vector<Complex> pts{{0, 0}, {1, 0}};
    for (int g = 0; g < gen; ++g) {
        std::vector<Complex> next;
        next.reserve(4 * (pts.size() - 1) + 1);
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            const Complex a = pts[i], b = pts[i + 1];
            const Complex d = (b - a) / 3.0;
            next.push_back(a);
            next.push_back(a + d);
            next.push_back(a + d + d * std::polar(1.0, kPi / 3.0));
            next.push_back(a + 2.0 * d);
        }
        next.push_back(pts.back());
        pts = std::move(next);
    }
    return pts;
}

}  // namespace

TEST_CASE("winding integral: quarter circle arc is pi/2") {
    std::vector<Complex> v;
    for (int i = 0; i <= 64; ++i)
        v.push_back(std::polar(1.0, kPi / 2.0 * i / 64.0));
    Polyline arc(std::move(v), false);
    CHECK(winding_integral(arc, {0, 0}) == doctest::Approx(kPi / 2).epsilon(1e-6));
}

TEST_CASE("winding integral: single straight segment stays in (-pi, pi)") {
    CounterRng rng(42, 0);
    for (int t = 0; t < 200; ++t) {
        const Complex a{rng.next_double() * 4 - 2, rng.next_double() * 4 - 2};
        const Complex b{rng.next_double() * 4 - 2, rng.next_double() * 4 - 2};
        const Complex pole{rng.next_double() * 4 - 2, rng.next_double() * 4 - 2};
        if (std::abs(a - b) < 1e-6) continue;
        if (segment_distance({a, b}, pole) < 1e-6) continue;
        const double w = winding_integral(Polyline({a, b}, false), pole);
        CHECK(std::abs(w) < kPi);
    }
}

TEST_CASE("winding integral: closed loop winds by 2 pi or 0") {
    const Polyline loop = circle_polyline({0, 0}, 1.0, 256);
    double total = 0.0;
    for (std::size_t i = 0; i < loop.segment_count(); ++i) {
        const Segment s = loop.segment(i);
        total += arg_increment(s.a, s.b, Complex{0.1, 0.2});
    }
    CHECK(total == doctest::Approx(kTwoPi).epsilon(1e-9));
    total = 0.0;
    for (std::size_t i = 0; i < loop.segment_count(); ++i) {
        const Segment s = loop.segment(i);
        total += arg_increment(s.a, s.b, Complex{2.5, 0.0});
    }
    CHECK(total == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("winding integral: additive under concatenation, antisymmetric") {
    std::vector<Complex> v;
    CounterRng rng(7, 0);
    Complex p{2, 0};
    v.push_back(p);
    for (int i = 0; i < 40; ++i) {
        p += Complex{0.2 * rng.next_double() - 0.1, 0.2 * rng.next_double() - 0.05};
        v.push_back(p);
    }
    const Complex pole{0, -3};
    const Polyline path(v, false);
    const std::size_t cut = 17;
    std::vector<Complex> left(v.begin(), v.begin() + cut + 1);
    std::vector<Complex> right(v.begin() + cut, v.end());
    const double whole = winding_integral(path, pole);
    const double parts = winding_integral(Polyline(left, false), pole) +
                         winding_integral(Polyline(right, false), pole);
    CHECK(whole == doctest::Approx(parts).epsilon(1e-12));
    CHECK(winding_integral(path.reversed(), pole) ==
          doctest::Approx(-whole).epsilon(1e-12));
}

TEST_CASE("winding integral: pole on path throws") {
    const Polyline seg({{-1, 0}, {1, 0}}, false);
    CHECK_THROWS_AS(winding_integral(seg, Complex{0, 0}), PoleOnPath);
}

TEST_CASE("hyperbolic rho: values and invariance") {
    CHECK(hyperbolic_rho({0, 0}, {0, 0}) == 0.0);
    CHECK(hyperbolic_rho({0, 0}, {0.3, 0.4}) == doctest::Approx(0.5));
    // (0.5, -0.5): |1 / 1.25| = 0.8, direct evaluation
    CHECK(hyperbolic_rho({0.5, 0}, {-0.5, 0}) == doctest::Approx(0.8));
    CHECK_THROWS_AS(hyperbolic_rho({1.2, 0}, {0, 0}), OutsideDisk);

    // symmetry + Moebius invariance under z -> (z-c)/(1-conj(c) z)
    CounterRng rng(11, 0);
    for (int t = 0; t < 100; ++t) {
        const auto rnd = [&] {
            return std::polar(0.95 * rng.next_double(), rng.next_angle());
        };
        const Complex z = rnd(), w = rnd(), c = rnd();
        const auto moebius = [&](Complex x) {
            return (x - c) / (1.0 - std::conj(c) * x);
        };
        CHECK(hyperbolic_rho(z, w) == doctest::Approx(hyperbolic_rho(w, z)).epsilon(1e-12));
        CHECK(hyperbolic_rho(moebius(z), moebius(w)) ==
              doctest::Approx(hyperbolic_rho(z, w)).epsilon(1e-9));
    }
}

TEST_CASE("circle intersections: unit circle vs long horizontal segment") {
    const Polyline seg({{-2, 0}, {2, 0}}, false);
    const auto hits = circle_polyline_intersections(Disk({0, 0}, 1.0), seg);
    REQUIRE(hits.size() == 2);
    CHECK(hits[0].point.real() == doctest::Approx(-1.0));
    CHECK(hits[1].point.real() == doctest::Approx(1.0));
}

TEST_CASE("circle intersections: disjoint circle gives empty list") {
    const Polyline seg({{-2, 0}, {2, 0}}, false);
    CHECK(circle_polyline_intersections(Disk({0, 5}, 1.0), seg).empty());
}

TEST_CASE("circle intersections: koch gen-3 vs vertex disk matches brute force") {
    const Polyline arc(koch_arc(3), false);
    // disk of radius 3^-2 centered at a vertex
    const Disk d(arc.vertices()[27], 1.0 / 9.0);
    const auto hits = circle_polyline_intersections(d, arc);
    std::size_t transversal = 0;
    for (const auto& h : hits)
        if (!h.degenerate) ++transversal;
    CHECK(transversal == brute_circle_hits(d, arc));
}

TEST_CASE("circle intersections: random disks match brute force") {
    const Polyline arc(koch_arc(4), false);
    CounterRng rng(5, 0);
    for (int t = 0; t < 100; ++t) {
        const Disk d({rng.next_double(), rng.next_double() * 0.6 - 0.1},
                     0.02 + 0.3 * rng.next_double());
        const auto hits = circle_polyline_intersections(d, arc);
        std::size_t transversal = 0;
        for (const auto& h : hits)
            if (!h.degenerate) ++transversal;
        CHECK(transversal == brute_circle_hits(d, arc));
    }
}

TEST_CASE("point in jordan: square") {
    const Polyline sq = unit_square();
    CHECK(point_in_jordan(sq, {0.5, 0.5}) == Location::inside);
    CHECK(point_in_jordan(sq, {2, 2}) == Location::outside);
    CHECK(point_in_jordan(sq, {0.5, 0.0}) == Location::boundary);
}

TEST_CASE("point in jordan: koch snowflake gen-4 centroid, winding oracle") {
    // closed snowflake: three koch arcs around a triangle
    std::vector<Complex> tri{{0, 0}, {1, 0},
                             {0.5, -std::sqrt(3.0) / 2.0}};
    std::vector<Complex> boundary;
    for (int side = 0; side < 3; ++side) {
        const Complex a = tri[side], b = tri[(side + 1) % 3];
        for (const Complex p : koch_arc(4)) {
            const Complex q = a + (b - a) * p.real() +
                              (b - a) * Complex{0, 1} * p.imag();
            if (!boundary.empty() && std::abs(q - boundary.back()) < 1e-14)
                continue;
            boundary.push_back(q);
        }
        boundary.pop_back();  // shared corner, re-added by the next side
        boundary.push_back(b);
    }
    boundary.pop_back();
    const Polyline snow(boundary, true);
    const Complex centroid = (tri[0] + tri[1] + tri[2]) / 3.0;
    CHECK(point_in_jordan(snow, centroid) == Location::inside);

    // winding-number oracle
    double w = 0.0;
    for (std::size_t i = 0; i < snow.segment_count(); ++i) {
        const Segment s = snow.segment(i);
        w += arg_increment(s.a, s.b, centroid);
    }
    CHECK(std::abs(std::abs(w) - kTwoPi) < 1e-9);
}

TEST_CASE("polyline validation") {
    CHECK_THROWS(Polyline({{0, 0}}, false));
    CHECK_THROWS(Polyline({{0, 0}, {0, 0}}, false));
    // self-crossing bowtie rejected when asked to validate
    CHECK_THROWS_AS(Polyline({{0, 0}, {1, 1}, {1, 0}, {0, 1}}, true,
                             Polyline::Validate::simple),
                    NotSimple);
    // square passes
    CHECK_NOTHROW(Polyline({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, true,
                           Polyline::Validate::simple));
}

TEST_CASE("point set diameter matches brute force") {
    CounterRng rng(3, 0);
    for (int t = 0; t < 50; ++t) {
        std::vector<Complex> pts;
        const int n = 3 + static_cast<int>(rng.next_below(40));
        for (int i = 0; i < n; ++i)
            pts.push_back({rng.next_double() * 3 - 1, rng.next_double() * 2});
        double brute = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                brute = std::max(brute, std::abs(pts[i] - pts[j]));
        CHECK(point_set_diameter(pts) == doctest::Approx(brute).epsilon(1e-12));
    }
}
