#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "qdlab/spectra.hpp"

using namespace qdlab;

namespace {

struct KochLab {
    PrefractalDomain dom;
    BoundaryIndex index;
    WalkBatch batch;
    HitPointGrid grid;
    RotationEngine engine;

    KochLab(const RepellerSpec& spec, int gen, std::uint64_t walks,
            std::uint64_t seed)
        : dom(generate_prefractal(spec, gen)),
          index(dom.boundary()),
          batch(index, dom.basepoint(), walks,
                WalkConfig{default_eps_hit(std::pow(
                               1.0 / spec.expansion_rate(), gen)),
                           100000, seed, 0, true}),
          grid(batch, dom.boundary().bbox()),
          engine(dom.jordan(), index) {}
};

// independent box-counting oracle over the arc vertices
std::size_t box_count(const std::vector<Complex>& pts, double delta) {
    std::set<std::pair<long, long>> cells;
    for (Complex p : pts)
        cells.insert({static_cast<long>(std::floor(p.real() / delta)),
                      static_cast<long>(std::floor(p.imag() / delta))});
    return cells.size();
}

}  // namespace

TEST_CASE("threshold predicates") {
    const double log_delta = std::log(0.01);
    // omega = delta^1 passes two-sided alpha=1 for any eta>0
    CHECK(measure_passes(log_delta, log_delta, 1.0, 0.1, SignMode::two_sided));
    CHECK(measure_passes(log_delta, log_delta, 1.0, 0.1, SignMode::plus));
    // omega = delta^1 fails the sigma=+ test at alpha=0.5 (threshold
    // delta^0.6 is larger) and passes the sigma=- test there
    CHECK_FALSE(measure_passes(log_delta, log_delta, 0.5, 0.1, SignMode::plus));
    CHECK(measure_passes(log_delta, log_delta, 0.5, 0.1, SignMode::minus));
    // monotone in eta: two-sided windows nest
    for (double lv : {-1.0, -3.0, -6.0}) {
        for (double eta1 : {0.1, 0.2, 0.4}) {
            const bool narrow =
                measure_passes(lv, log_delta, 1.0, eta1, SignMode::two_sided);
            const bool wide = measure_passes(lv, log_delta, 1.0, eta1 + 0.2,
                                             SignMode::two_sided);
            CHECK((!narrow || wide));
        }
    }
}

TEST_CASE("word index set: equal scales, mixed scales, unrepresentable") {
    const RepellerSpec koch = koch_spec();
    // equal scales 1/3: I^(3^-m) = compositions of m into 4 parts
    const auto idx = word_index_set(koch, std::pow(3.0, -3.0), 0.0);
    std::size_t expected = 0;
    for (int a = 0; a <= 3; ++a)
        for (int b = 0; b <= 3 - a; ++b)
            for (int c = 0; c <= 3 - a - b; ++c) ++expected;
    CHECK(idx.size() == expected);  // C(3+3,3) = 20
    for (const auto& k : idx) {
        int sum = 0;
        for (int v : k) sum += v;
        CHECK(sum == 3);
    }

    // scales (1/3, 1/9), delta = 3^-4 -> {(4,0),(2,1),(0,2)}
    RepellerSpec two;
    two.letters = {{1.0 / 3.0, 0.0, {0, 0}, true}, {1.0 / 9.0, 0.0, {0, 0}, true}};
    two.adjacency = {{1, 1}, {1, 1}};
    const auto idx2 = word_index_set(two, std::pow(3.0, -4.0), 0.0);
    REQUIRE(idx2.size() == 3);
    CHECK(idx2[0] == std::vector<int>{0, 2});
    CHECK(idx2[1] == std::vector<int>{2, 1});
    CHECK(idx2[2] == std::vector<int>{4, 0});

    // unrepresentable delta with tau = 0 is empty
    CHECK(word_index_set(koch, 0.2, 0.0).empty());
}

TEST_CASE("word count: surrogate exact cases") {
    const RepellerSpec koch = koch_spec();
    // eta wide open: every admissible word of the family counts
    WordCountParams p;
    p.alpha = 1.0;
    p.gamma = 0.0;
    p.eta = 10.0;
    p.tau = 1e-9;
    const double delta = std::pow(3.0, -4.0);
    const WordCountResult all = word_count(koch, delta, p);
    CHECK(all.count == 256);  // 4^4
    CHECK(all.enumerated == 256);

    // twisted koch: gamma window centered on the uniform bias passes all
    // words once eta covers the +-pi/3 letter dispersion
    const RepellerSpec tw = twisted_koch_spec(0.15);
    WordCountParams q;
    q.tau = 0.2;  // unequal scales: a tolerant diameter window
    const double m_typical = std::log(1.0 / delta) / std::log(3.0);
    q.gamma = -0.15 * m_typical / std::log(1.0 / delta);  // symbolic bias
    q.eta = kPi / (3.0 * std::log(3.0)) + 0.4;
    q.alpha = 1.26;
    const WordCountResult tw_all = word_count(tw, delta, q);
    CHECK(tw_all.count == tw_all.enumerated);
    CHECK(tw_all.count > 0);
}

TEST_CASE("word count vs packing on koch (consistency at desk scale)") {
    KochLab lab(koch_spec(), 6, 400000, 2024);
    const double delta = std::pow(3.0, -4.0);
    const double alpha0 = std::log(4.0) / std::log(3.0);

    WordCountParams wp;
    wp.alpha = alpha0;
    wp.eta = 0.2;
    wp.gamma = 10.0;  // (gamma+eta) log delta = -44: the rotation test is inert
    wp.rotation_sign = SignMode::plus;
    wp.tau = 1e-9;
    // surrogate weights: all 4^4 words sit exactly at the typical exponent
    const WordCountResult words = word_count(koch_spec(), delta, wp);
    CHECK(words.count == 256);

    PackingParams pp;
    pp.alpha = alpha0;
    pp.eta = 0.6;
    pp.gamma = 0.0;
    pp.rot_weights = RotWeights::symbolic;
    const PackingResult pack =
        packing_count(lab.dom, lab.index, lab.batch, lab.grid, nullptr, delta, pp);
    CHECK(pack.count > 0);
    const double ratio = static_cast<double>(words.count) /
                         static_cast<double>(pack.count);
    CHECK(ratio >= 1.0 / 8.0);
    CHECK(ratio <= 8.0);
}

TEST_CASE("packing: impossible measure threshold gives zero") {
    KochLab lab(koch_spec(), 5, 100000, 7);
    PackingParams p;
    p.alpha = -2.0;  // delta^(alpha+eta) > 1: no omega can exceed it
    p.eta = 1.0;
    p.measure_sign = SignMode::plus;
    p.rot_weights = RotWeights::symbolic;
    const PackingResult r = packing_count(lab.dom, lab.index, lab.batch,
                                          lab.grid, nullptr,
                                          std::pow(3.0, -3.0), p);
    CHECK(r.count == 0);
}

TEST_CASE("packing: koch box dimension slope, two-sided window wide open") {
    // generation tracks the scale, so the packing is exactly self-similar
    std::vector<std::pair<double, double>> rows;
    std::vector<std::pair<double, double>> oracle_rows;
    for (int m = 4; m <= 6; ++m) {
        const double delta = std::pow(3.0, -m);
        KochLab lab(koch_spec(), m, 150000, 31415 + m);
        PackingParams p;
        p.alpha = 1.26;
        p.gamma = 0.0;
        p.eta = 3.0;  // window covers every disk
        p.rot_weights = RotWeights::symbolic;
        const PackingResult r = packing_count(lab.dom, lab.index, lab.batch,
                                              lab.grid, nullptr, delta, p);
        rows.emplace_back(delta, static_cast<double>(r.count));
        oracle_rows.emplace_back(
            delta, static_cast<double>(box_count(lab.dom.arc_vertices(), delta)));
    }
    const ExponentFit fit = fit_exponent(rows);
    const ExponentFit oracle = fit_exponent(oracle_rows);
    const double dim = std::log(4.0) / std::log(3.0);
    CHECK(std::abs(oracle.slope - dim) <= 0.08);
    CHECK(std::abs(fit.slope - dim) <= 0.08);
}

TEST_CASE("packing on the disk domain: count ~ 1/delta within factor 4") {
    std::vector<Complex> v;
    const std::size_t n = 1 << 14;
    for (std::size_t i = 0; i < n; ++i)
        v.push_back(std::polar(1.0, kTwoPi * i / n));
    const JordanDomain dom{Polyline(std::move(v), true), {0, 0}, "disk"};
    const BoundaryIndex index(dom.boundary);
    WalkConfig cfg;
    cfg.eps_hit = 1e-6;
    cfg.seed = 5150;
    cfg.record_points = true;
    const WalkBatch batch(index, {0, 0}, 300000, cfg);
    const HitPointGrid grid(batch, dom.boundary.bbox());
    const RotationEngine engine(dom, index);

    const double delta = std::ldexp(1.0, -8);
    PackingParams p;
    p.alpha = 1.0;
    p.gamma = 0.0;
    p.eta = 0.5;
    p.keep_items = true;
    const auto candidates = boundary_candidates(index, delta / 4.0);
    const PackingResult r = packing_count(
        index, grid, candidates, delta, p,
        [&](std::size_t, Complex c) -> std::optional<double> {
            try {
                return engine.rot_disk(Disk(c, delta)).log_rot;
            } catch (const Error&) {
                return std::nullopt;
            }
        });
    const double inv_delta = 1.0 / delta;
    CHECK(static_cast<double>(r.count) >= inv_delta / 4.0);
    CHECK(static_cast<double>(r.count) <= 4.0 * inv_delta);
}

TEST_CASE("crosscut count: trivial and zero cases") {
    const RepellerSpec koch = koch_spec();
    const double r = 1.0 - std::pow(0.25, 3);  // 1-r = 4^-3 = typical depth-3
    CrosscutParams p;
    p.a = -0.5;   // diam floor (1-r)^1.5: every depth-3 cylinder passes
    p.b = 10.0;   // log rot >= -10 log(1/(1-r)): no constraint
    const CrosscutResult all = crosscut_count(koch, r, p);
    CHECK(all.count == 64);  // the whole depth-3 family sits in the window
    CHECK_FALSE(all.window_empty);

    // rotation threshold beyond the symbolic range gives zero
    CrosscutParams q;
    q.a = -0.5;
    q.b = -3.0;  // requires log rot >= 3 log(1/(1-r)) = 12.5: impossible
    const CrosscutResult none = crosscut_count(koch, r, q);
    CHECK(none.count == 0);

    // precondition: logloglog(1/(1-r)) > 0
    CHECK_THROWS(crosscut_count(koch, 0.9, p));
}

TEST_CASE("crosscut vs distortion ordering on koch (desk scale)") {
    KochLab lab(koch_spec(), 6, 400000, 99);
    const double one_minus_r = std::pow(0.25, 3);
    const double r = 1.0 - one_minus_r;

    CrosscutParams cp;
    cp.a = 0.0;
    cp.b = 0.0;
    cp.weights = WordWeights::surrogate;
    const CrosscutResult cc = crosscut_count(koch_spec(), r, cp);

    DistortionParams dp;
    dp.a = 0.0;
    dp.b = 0.0;
    dp.eta = 0.4;
    const DistortionResult d = distortion_count(lab.index, lab.batch,
                                                lab.engine, r, dp);
    // d <= d^cc at count level, with slack for the different families
    CHECK(static_cast<double>(cc.count) >=
          static_cast<double>(d.count) / 4.0);
}

TEST_CASE("distortion count: disk gives d-exponent 1") {
    std::vector<Complex> v;
    const std::size_t n = 1 << 13;
    for (std::size_t i = 0; i < n; ++i)
        v.push_back(std::polar(1.0, kTwoPi * i / n));
    const JordanDomain dom{Polyline(std::move(v), true), {0, 0}, "disk"};
    const BoundaryIndex index(dom.boundary);
    WalkConfig cfg;
    cfg.eps_hit = 1e-6;
    cfg.seed = 404;
    const WalkBatch batch(index, {0, 0}, 100000, cfg);
    const RotationEngine engine(dom, index);

    // The anchored branch makes log rot position-dependent on the disk:
    // values span (-3pi/2, pi/2], so the rotation window needs
    // eta ln(1/(1-r)) > 3pi/2 to cover every arc.
    DistortionParams p;
    p.a = 0.0;
    p.b = 0.0;
    p.eta = 0.9;
    const DistortionResult res = distortion_count(index, batch, engine,
                                                  1.0 - std::ldexp(1.0, -8), p);
    CHECK(res.arcs == 256);
    // one or two arcs can straddle the anchor-wrap discontinuity
    CHECK(res.lambda_fraction >= 0.98);
    CHECK(std::abs(res.d_exponent - 1.0) <= 0.01);

    // a >= 1 forces zero (proxy bounded by diam(Omega)/(2 pi (1-r)))
    DistortionParams q;
    q.a = 1.0;
    q.b = 0.0;
    q.eta = 0.3;
    const DistortionResult zero = distortion_count(index, batch, engine,
                                                   1.0 - std::ldexp(1.0, -8), q);
    CHECK(zero.count == 0);
}

TEST_CASE("distortion count: insufficient hits throws") {
    std::vector<Complex> v;
    for (std::size_t i = 0; i < 512; ++i)
        v.push_back(std::polar(1.0, kTwoPi * i / 512));
    const JordanDomain dom{Polyline(std::move(v), true), {0, 0}, "disk"};
    const BoundaryIndex index(dom.boundary);
    WalkConfig cfg;
    cfg.eps_hit = 1e-6;
    cfg.seed = 1;
    const WalkBatch batch(index, {0, 0}, 100, cfg);
    const RotationEngine engine(dom, index);
    DistortionParams p;
    CHECK_THROWS_AS(
        distortion_count(index, batch, engine, 1.0 - 1.0 / 64.0, p),
        InsufficientHits);
}

TEST_CASE("reflection symmetry of surrogate word counts") {
    const RepellerSpec tw = twisted_koch_spec(0.15);
    const RepellerSpec ref = tw.reflected();
    const double delta = std::pow(3.0, -4.0);
    WordCountParams p;
    p.alpha = 1.26;
    p.eta = 0.5;
    p.tau = 0.25;
    p.gamma = 0.12;
    p.measure_sign = SignMode::two_sided;
    p.rotation_sign = SignMode::plus;
    const WordCountResult a = word_count(tw, delta, p);
    WordCountParams q = p;
    q.gamma = -p.gamma;
    q.rotation_sign = SignMode::minus;
    const WordCountResult b = word_count(ref, delta, q);
    CHECK(a.enumerated == b.enumerated);
    CHECK(a.count == b.count);
    CHECK(a.count > 0);
    CHECK(a.count < a.enumerated);  // the filter actually bites
}

TEST_CASE("monotonicity in eta for word counts") {
    const RepellerSpec tw = twisted_koch_spec(0.1);
    const double delta = std::pow(3.0, -4.0);
    std::size_t prev = 0;
    for (double eta : {0.1, 0.3, 0.6, 1.2}) {
        WordCountParams p;
        p.alpha = 1.26;
        p.gamma = -0.1 / std::log(3.0);
        p.eta = eta;
        p.tau = 0.25;
        const WordCountResult r = word_count(tw, delta, p);
        CHECK(r.count >= prev);
        prev = r.count;
    }
}

TEST_CASE("two-sided counts never exceed one-sided counts") {
    const RepellerSpec koch = koch_spec();
    const double delta = std::pow(3.0, -4.0);
    WordCountParams base;
    base.alpha = 1.26;
    base.gamma = 0.05;
    base.eta = 0.25;
    base.tau = 1e-9;
    WordCountResult two, plus, minus;
    base.rotation_sign = SignMode::two_sided;
    two = word_count(koch, delta, base);
    base.rotation_sign = SignMode::plus;
    plus = word_count(koch, delta, base);
    base.rotation_sign = SignMode::minus;
    minus = word_count(koch, delta, base);
    CHECK(two.count <= plus.count);
    CHECK(two.count <= minus.count);
}

TEST_CASE("fit exponent") {
    std::vector<std::pair<double, double>> rows;
    for (int m = 2; m <= 6; ++m)
        rows.emplace_back(std::pow(3.0, -m), std::pow(4.0, m));
    const ExponentFit fit = fit_exponent(rows);
    CHECK(fit.slope ==
          doctest::Approx(std::log(4.0) / std::log(3.0)).epsilon(1e-9));
    CHECK(fit.residual_rms <= 1e-9);

    std::vector<std::pair<double, double>> flat;
    for (int m = 2; m <= 5; ++m) flat.emplace_back(std::pow(2.0, -m), 7.0);
    CHECK(fit_exponent(flat).slope == doctest::Approx(0.0));

    std::vector<std::pair<double, double>> with_zero = flat;
    with_zero.emplace_back(0.01, 0.0);
    const ExponentFit fz = fit_exponent(with_zero);
    CHECK(fz.dropped == 1);

    std::vector<std::pair<double, double>> few{{0.1, 5.0}, {0.01, 9.0}};
    CHECK_THROWS_AS(fit_exponent(few), TooFewScales);
}
