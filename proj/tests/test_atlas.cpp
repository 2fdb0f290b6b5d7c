#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qdlab/atlas.hpp"

using namespace qdlab;

TEST_CASE("disk kind: identity map") {
    const AtlasDomain d = AtlasDomain::disk();
    CHECK(d.phi({0.3, 0.2}) == Complex{0.3, 0.2});
    CHECK(d.phi_prime({0.3, 0.2}) == Complex{1.0, 0.0});
    CHECK(d.abs_phi_prime({0.5, 0}) == 1.0);
    CHECK(d.arg_phi_prime({0.5, 0}) == 0.0);
}

TEST_CASE("wedge: |phi'(r)| = alpha (1-r)^(alpha-1), symbolic differentiation") {
    for (double alpha : {0.5, 0.7, 1.0, 1.3}) {
        const AtlasDomain d = AtlasDomain::wedge(alpha);
        for (double r : {0.0, 0.5, 0.9, 0.999}) {
            CHECK(d.abs_phi_prime({r, 0}) ==
                  doctest::Approx(alpha * std::pow(1 - r, alpha - 1)).epsilon(1e-12));
            // finite-difference oracle along the real axis
            const double h = 1e-7 * (1 - r);
            const double fd =
                std::abs(d.phi({r + h, 0}) - d.phi({r - h, 0})) / (2 * h);
            CHECK(d.abs_phi_prime({r, 0}) == doctest::Approx(fd).epsilon(1e-5));
        }
    }
}

TEST_CASE("spiral wedge: arg phi'(r) = arg(1+i beta) + beta log(1-r)") {
    for (double beta : {0.2, -0.2, 0.1}) {
        const AtlasDomain d = AtlasDomain::spiral_wedge(1.0, beta);
        for (double r : {0.0, 0.5, 0.99}) {
            const double expected =
                std::atan2(beta, 1.0) + beta * std::log(1 - r);
            CHECK(d.arg_phi_prime({r, 0}) == doctest::Approx(expected).epsilon(1e-12));
            // |phi'| from the closed form, cross-checked against the complex
            // derivative
            CHECK(d.abs_phi_prime({r, 0}) ==
                  doctest::Approx(std::abs(d.phi_prime({r, 0}))).epsilon(1e-12));
            CHECK(d.arg_phi_prime({r, 0}) ==
                  doctest::Approx(std::arg(d.phi_prime({r, 0})) +
                                  std::round((d.arg_phi_prime({r, 0}) -
                                              std::arg(d.phi_prime({r, 0}))) /
                                             kTwoPi) *
                                      kTwoPi)
                      .epsilon(1e-10));
        }
    }
    CHECK_THROWS_AS(AtlasDomain::wedge(2.0), Error);
    CHECK_THROWS_AS(AtlasDomain::spiral_wedge(1.0, 0.5), Error);
    CHECK_THROWS_AS(AtlasDomain::disk().phi({2, 0}), OutsideDisk);
}

TEST_CASE("representing point") {
    const Complex p = representing_point({0.0, 0.1});
    CHECK(p == Complex{0.9, 0.0});
    const Complex q = representing_point({kPi / 2, 0.25});
    CHECK(q.real() == doctest::Approx(0.0));
    CHECK(q.imag() == doctest::Approx(0.75));
    CHECK_THROWS_AS(representing_point({0.0, 0.6}), ArcTooLong);
}

TEST_CASE("exact harmonic measure of preimage intervals") {
    CHECK(exact_harmonic_measure(kPi) == doctest::Approx(0.5));
    CHECK(exact_harmonic_measure(kTwoPi / 3) == doctest::Approx(1.0 / 3.0));
    CHECK(exact_harmonic_measure(0.01) == doctest::Approx(0.01 / kTwoPi));
}

TEST_CASE("boundary offset from tip is stable at tiny angles") {
    const AtlasDomain d = AtlasDomain::spiral_wedge(1.0, 0.2);
    const double theta = 0x1p-40;
    const Complex off = d.boundary_offset_from_tip(theta);
    // |(1 - e^{i theta})^(1+i beta)| = (2 sin(theta/2)) e^{-beta arg(...)}
    const double expected_mod =
        2 * std::sin(theta / 2) *
        std::exp(-0.2 * 0.5 * (theta - kPi));
    CHECK(std::abs(off) == doctest::Approx(expected_mod).epsilon(1e-12));
    // full-precision far from the tip too
    const Complex off2 = d.boundary_offset_from_tip(1.0);
    const Complex direct = d.phi(std::polar(1.0, 1.0) * (1.0 - 1e-14)) - d.tip();
    CHECK(std::abs(off2 - direct) < 1e-7);
}

TEST_CASE("graded boundary mesh: refinement near the tip") {
    const AtlasDomain d = AtlasDomain::wedge(0.7);
    const JordanDomain jd = d.boundary_domain(std::size_t{1} << 12, 0x1p-24);
    CHECK(jd.boundary.vertex_count() >= (std::size_t{1} << 12));
    // every segment close to the tip is shorter than dist-to-tip / 8
    const Complex tip = d.tip();
    for (std::size_t i = 0; i < jd.boundary.segment_count(); ++i) {
        const Segment s = jd.boundary.segment(i);
        const double dist =
            std::min(std::abs(s.a - tip), std::abs(s.b - tip));
        if (dist > 1e-6 && dist < 0.1)
            CHECK(s.length() < dist / 8.0);
    }
    CHECK(point_in_jordan(jd.boundary, jd.basepoint) == Location::inside);
}

TEST_CASE("image arc probe: disk proxy vs exact, chord-vs-arc bound") {
    const AtlasDomain d = AtlasDomain::disk();
    for (double len : {0.2, 0.05, 0.01}) {
        const ImageArcProbe p = image_arc_probe(d, {0.3, len});
        // proxy = chord of the circular arc -> 2 sin(len/2) / len of exact 1
        const double lower = 2.0 / kPi;  // worst chord/arc ratio on a circle
        CHECK(p.proxy_abs_phi_prime / p.exact_abs_phi_prime >= lower);
        CHECK(p.proxy_abs_phi_prime / p.exact_abs_phi_prime <= 1.0 + 1e-9);
        CHECK(p.exact_abs_phi_prime == doctest::Approx(1.0));
    }
}

TEST_CASE("image arc probe: wedge ratio fixed-interval invariant (HM*)") {
    const AtlasDomain d = AtlasDomain::wedge(0.7);
    const double center = 0x1p-4;
    double prev_log_ratio = 0.0;
    std::vector<double> log_ratios;
    for (int k = 4; k <= 12; ++k) {
        const double len = std::ldexp(1.0, -k);
        const ImageArcProbe p = image_arc_probe(d, {center, len}, 512);
        const double ratio = p.proxy_abs_phi_prime / p.exact_abs_phi_prime;
        CHECK(ratio > 1.0 / kPi);
        CHECK(ratio < kPi);
        log_ratios.push_back(std::log(ratio));
        prev_log_ratio = log_ratios.back();
    }
    (void)prev_log_ratio;
    // no monotone trend: fitted slope of log-ratio vs k within +/- 0.1
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < log_ratios.size(); ++i) {
        const double x = static_cast<double>(i + 4);
        sx += x;
        sy += log_ratios[i];
        sxx += x * x;
        sxy += x * log_ratios[i];
    }
    const double n = static_cast<double>(log_ratios.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(std::abs(slope) <= 0.1);
}

TEST_CASE("image arc probe: tip-centered wedge arc has power-law proxy") {
    const AtlasDomain d = AtlasDomain::wedge(0.7);
    // lambda = 2^-10 straddling the tip: proxy ~ c * lambda^(alpha-1)
    const double len = 0x1p-10;
    const ImageArcProbe p = image_arc_probe(d, {0.0, len}, 512, true);
    const double expected =
        2.0 * std::sin(0.35 * kPi) * std::pow(len / 2.0, 0.7) / len;
    CHECK(p.proxy_abs_phi_prime == doctest::Approx(expected).epsilon(0.02));
}
