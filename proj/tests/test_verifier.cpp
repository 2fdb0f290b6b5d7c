#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qdlab/verifier.hpp"

using namespace qdlab;

TEST_CASE("carleson scan: surrogate deviation is identically zero") {
    const PrefractalDomain dom = generate_prefractal(koch_spec(), 6);
    const int yl[] = {1, 2, 3, 4};
    const CarlesonScanReport rep = carleson_ratio_scan(dom, nullptr, yl, 10, 11);
    CHECK(rep.surrogate);
    for (const CarlesonCase& c : rep.cases) CHECK(c.dev <= 1e-12);
    for (double m : rep.mean_dev) CHECK(m <= 1e-12);
}

TEST_CASE("carleson scan: koch mc decay at modest budget") {
    const PrefractalDomain dom = generate_prefractal(koch_spec(), 6);
    const BoundaryIndex index(dom.boundary());
    WalkConfig cfg;
    cfg.eps_hit = default_eps_hit(std::pow(1.0 / 3.0, 6));
    cfg.seed = 777;
    const WalkBatch batch(index, dom.basepoint(), 2000000, cfg);
    const int yl[] = {1, 4};
    const CarlesonScanReport rep =
        carleson_ratio_scan(dom, &batch, yl, 12, 2027, 0.35);
    // |Y| = 1 deviations are O(1); record and compare against |Y| = 4
    CHECK(rep.mean_dev[0] > 0.02);
    CHECK(rep.mean_dev[1] + 2 * rep.se_of_mean[1] <
          rep.mean_dev[0] - 2 * rep.se_of_mean[0]);
    // throws when the budget cannot resolve the cylinders
    const WalkBatch tiny(index, dom.basepoint(), 5000, cfg);
    CHECK_THROWS_AS(carleson_ratio_scan(dom, &tiny, yl, 4, 3, 0.02),
                    BudgetExceeded);
}

TEST_CASE("rotation multiplicativity: symbolic identity, geometric cushion") {
    const PrefractalDomain dom = generate_prefractal(twisted_koch_spec(0.15), 6);
    const BoundaryIndex index(dom.boundary());
    const RotationEngine engine(dom.jordan(), index);
    const RotationMultReport rep =
        rotation_multiplicativity_scan(dom, &engine, 20, 3, 4242);
    CHECK(rep.symbolic_max_dev <= 1e-12);
    CHECK(rep.geometric_cases.size() == 20);
    CHECK(rep.within_cushion);
    CHECK(rep.geometric_max_dev <= rep.cushion);
    // the interesting empirical fact: the deviations are far below the
    // cushion (order pi, not 100 pi)
    CHECK(rep.geometric_max_dev <= 2 * kTwoPi);

    // reflected spec gives deviations of identical magnitude under the
    // mirrored scan (same seeds, conjugated geometry)
    const PrefractalDomain ref = dom.reflected();
    const BoundaryIndex rindex(ref.boundary());
    const RotationEngine rengine(ref.jordan(), rindex);
    const RotationMultReport rrep =
        rotation_multiplicativity_scan(ref, &rengine, 20, 3, 4242);
    CHECK(rrep.symbolic_max_dev <= 1e-12);
    CHECK(std::abs(rrep.geometric_max_dev - rep.geometric_max_dev) <=
          0.5 * rep.geometric_max_dev + 0.5);
}

TEST_CASE("propagation: exact surrogate inequality") {
    const RepellerSpec koch = koch_spec();
    const double delta = std::pow(3.0, -2.0);
    // gamma window selecting words with positive symbolic rotation
    const int ns[] = {2, 3};
    const PropagationReport rep = propagation_check(
        koch, delta, std::log(4.0) / std::log(3.0), -0.15, 0.10, ns,
        SignMode::plus, SignMode::plus);
    CHECK(rep.base_count > 0);
    CHECK(rep.base_count < 16);
    CHECK(rep.holds);
    for (const PropagationPower& p : rep.powers) {
        CHECK(static_cast<double>(p.count_deep) >= p.base_power);
        // explicit concatenations: all distinct, all passing at 2 eta
        CHECK(p.concat_all_pass);
        CHECK(static_cast<double>(p.concat_distinct) ==
              doctest::Approx(p.base_power));
    }
}

TEST_CASE("propagation: single qualifying word still propagates") {
    const RepellerSpec koch = koch_spec();
    // rot > delta^(gamma+eta) with a threshold isolating the double-plus
    // rotation word (2,2): sum of angles 2 pi/3
    const double delta = std::pow(3.0, -2.0);
    // require log rot > c with c between pi/3 and 2 pi/3:
    // (gamma+eta) log delta = -c  =>  gamma+eta = c / log(1/delta)
    const double c = 0.6 * kPi;
    // (gamma + eta) log delta = c with log delta < 0 makes gamma negative
    const double gamma_plus_eta = c / std::log(delta);
    const int ns[] = {2};
    const PropagationReport rep =
        propagation_check(koch, delta, std::log(4.0) / std::log(3.0),
                          gamma_plus_eta - 0.05, 0.05, ns, SignMode::plus,
                          SignMode::plus);
    CHECK(rep.base_count == 1);
    CHECK(rep.holds);
    CHECK(rep.powers[0].count_deep >= 1);
}

TEST_CASE("multinomial identity: sum C(N,m) m^n >= N^n at N=3, n=3") {
    const auto choose = [](int n, int k) {
        double c = 1;
        for (int i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
        return c;
    };
    double sum = 0;
    for (int m = 1; m <= 3; ++m) sum += choose(3, m) * std::pow(m, 3);
    CHECK(sum == doctest::Approx(54.0));
    CHECK(sum >= std::pow(3.0, 3.0));
}

TEST_CASE("finite scale spectrum: koch surrogate nondecreasing") {
    const RepellerSpec koch = koch_spec();
    const int ns[] = {2, 3};
    const FiniteScaleReport rep = finite_scale_spectrum(
        koch, std::pow(3.0, -3.0), std::log(4.0) / std::log(3.0), -0.10, 0.15,
        ns, SignMode::plus, SignMode::plus);
    CHECK(rep.base_exponent > 0.0);
    CHECK(rep.min_deeper_exponent >= rep.base_exponent - 1e-12);
}

TEST_CASE("finite scale spectrum: degenerate single-word family") {
    const RepellerSpec koch = koch_spec();
    // isolate the all-(2) word as in the single-word propagation case
    const double delta = std::pow(3.0, -2.0);
    const double c = 0.6 * kPi;
    const double gamma_plus_eta = c / std::log(delta);
    const int ns[] = {2, 3};
    const FiniteScaleReport rep =
        finite_scale_spectrum(koch, delta, std::log(4.0) / std::log(3.0),
                              gamma_plus_eta - 0.02, 0.02, ns, SignMode::plus,
                              SignMode::plus);
    // a single qualifying word per scale keeps the exponent at zero
    CHECK(rep.base_exponent == doctest::Approx(0.0));
    CHECK(rep.min_deeper_exponent >= -1e-12);
}
