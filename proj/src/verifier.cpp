#include "qdlab/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "qdlab/rng.hpp"

namespace qdlab {

namespace {

Word random_admissible_word(const RepellerSpec& spec, int length,
                            CounterRng& rng, int prev = -1) {
    Word w;
    w.reserve(length);
    int last = prev;
    for (int i = 0; i < length; ++i) {
        std::vector<int> options;
        for (int l = 0; l < spec.alphabet(); ++l)
            if (last < 0 || spec.adjacency[last][l]) options.push_back(l);
        if (options.empty()) throw Inadmissible("no admissible continuation");
        last = options[rng.next_below(options.size())];
        w.push_back(last);
    }
    return w;
}

double cylinder_measure(const PrefractalDomain& dom, const WalkBatch& batch,
                        const Word& w, double* rel_se) {
    const Cylinder c = dom.cylinder(w);
    const auto [f, l] = dom.boundary_range_of_arc(c.arc_lo, c.arc_hi);
    const MeasureEstimate m = batch.measure_range(f, l);
    if (rel_se) *rel_se = m.value > 0 ? m.std_error / m.value : 1e9;
    return m.value;
}

double surrogate_measure(const std::vector<double>& letter_w, const Word& w) {
    double v = 1.0;
    for (int l : w) v *= letter_w[l];
    return v;
}

Word concat(const Word& a, const Word& b) {
    Word out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

}  // namespace

CarlesonScanReport carleson_ratio_scan(const PrefractalDomain& dom,
                                       const WalkBatch* batch,
                                       std::span<const int> y_lengths,
                                       std::size_t triples_per_length,
                                       std::uint64_t seed, double max_rel_se) {
    CarlesonScanReport rep;
    rep.surrogate = (batch == nullptr);
    const RepellerSpec& spec = dom.spec();
    const std::vector<double> letter_w = spec.surrogate_letter_measures();

    std::uint64_t stream = 0;
    for (int ylen : y_lengths) {
        double dev_acc = 0.0, se_acc = 0.0;
        std::size_t used = 0;
        for (std::size_t t = 0; t < triples_per_length; ++t) {
            // The deviation statistic is about the |Y| dependence, and the
            // walk budget only resolves cylinders down to ~1/(max_rel_se^2
            // walks). Triples whose deepest cylinder falls below that
            // resolution are resampled a bounded number of times; if none
            // qualifies the budget is genuinely too small.
            Word x, y, z;
            bool resolvable = rep.surrogate;
            for (std::uint64_t attempt = 0; attempt < 24 && !resolvable;
                 ++attempt) {
                CounterRng rng(seed, stream++);
                x = random_admissible_word(spec, 1, rng);
                y = random_admissible_word(spec, ylen, rng, x.back());
                z = random_admissible_word(spec, 1, rng, y.back());
                Word probe = concat(concat(x, y), z);
                const Cylinder pc = dom.cylinder(probe);
                const auto [pf, pl] = dom.boundary_range_of_arc(pc.arc_lo, pc.arc_hi);
                const double hits =
                    static_cast<double>(batch->measure_range(pf, pl).hits);
                resolvable = hits * max_rel_se * max_rel_se >= 1.0;
            }
            if (rep.surrogate) {
                CounterRng rng(seed, stream++);
                x = random_admissible_word(spec, 1, rng);
                y = random_admissible_word(spec, ylen, rng, x.back());
                z = random_admissible_word(spec, 1, rng, y.back());
            } else if (!resolvable) {
                throw BudgetExceeded();
            }
            const Word xy = concat(x, y);
            const Word xyz = concat(xy, z);
            const Word yz = concat(y, z);

            CarlesonCase cs;
            cs.x = x;
            cs.y = y;
            cs.z = z;
            if (rep.surrogate) {
                cs.omega_xyz = surrogate_measure(letter_w, xyz);
                cs.omega_xy = surrogate_measure(letter_w, xy);
                cs.omega_y = surrogate_measure(letter_w, y);
                cs.omega_yz = surrogate_measure(letter_w, yz);
                cs.dev_se = 0.0;
            } else {
                double r1, r2, r3, r4;
                cs.omega_xyz = cylinder_measure(dom, *batch, xyz, &r1);
                cs.omega_xy = cylinder_measure(dom, *batch, xy, &r2);
                cs.omega_y = cylinder_measure(dom, *batch, y, &r3);
                cs.omega_yz = cylinder_measure(dom, *batch, yz, &r4);
                if (std::max({r1, r2, r3, r4}) > 1.5 * max_rel_se)
                    throw BudgetExceeded();
                cs.dev_se = std::sqrt(r1 * r1 + r2 * r2 + r3 * r3 + r4 * r4);
            }
            const double ratio =
                cs.omega_xyz * cs.omega_y / (cs.omega_xy * cs.omega_yz);
            cs.dev = std::abs(ratio - 1.0);
            rep.cases.push_back(cs);
            dev_acc += cs.dev;
            se_acc += cs.dev_se;
            ++used;
        }
        rep.y_lengths.push_back(ylen);
        rep.mean_dev.push_back(dev_acc / static_cast<double>(used));
        rep.mean_se.push_back(se_acc / static_cast<double>(used));
        rep.se_of_mean.push_back(rep.mean_se.back() /
                                 std::sqrt(static_cast<double>(used)));
    }

    // decay order: slope of log(mean dev) against (|Y| - 1)
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < rep.y_lengths.size(); ++i) {
        if (rep.mean_dev[i] > 0)
            pts.emplace_back(static_cast<double>(rep.y_lengths[i] - 1),
                             std::log(rep.mean_dev[i]));
    }
    if (pts.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (auto [x, y] : pts) {
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double n = static_cast<double>(pts.size());
        rep.decay_rate = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    return rep;
}

RotationMultReport rotation_multiplicativity_scan(const PrefractalDomain& dom,
                                                  const RotationEngine* engine,
                                                  std::size_t pairs,
                                                  int word_length,
                                                  std::uint64_t seed) {
    RotationMultReport rep;
    const RepellerSpec& spec = dom.spec();
    rep.cushion =
        2.0 * 4.0 * (kRotPointErrorBound + kRotCrosscutExtraBound);

    for (std::size_t t = 0; t < pairs; ++t) {
        CounterRng rng(seed, t);
        const Word x = random_admissible_word(spec, word_length, rng);
        const Word y = random_admissible_word(spec, word_length, rng, x.back());
        const Word xy = concat(x, y);

        // symbolic: additivity is an identity
        const double sym_dev =
            std::abs(rot_symbolic(spec, xy).log_rot -
                     rot_symbolic(spec, x).log_rot -
                     rot_symbolic(spec, y).log_rot);
        rep.symbolic_max_dev = std::max(rep.symbolic_max_dev, sym_dev);

        if (engine != nullptr) {
            const Word last_letter{x.back()};
            const double lr_xy =
                engine->rot_crosscut(dom.cylinder_arc(dom.cylinder(xy))).log_rot;
            const double lr_x =
                engine->rot_crosscut(dom.cylinder_arc(dom.cylinder(x))).log_rot;
            const double lr_y =
                engine->rot_crosscut(dom.cylinder_arc(dom.cylinder(y))).log_rot;
            const double lr_l =
                engine->rot_crosscut(dom.cylinder_arc(dom.cylinder(last_letter)))
                    .log_rot;
            const double dev = std::abs(lr_xy - lr_x - lr_y + lr_l);
            rep.geometric_cases.push_back({x, y, dev});
            rep.geometric_max_dev = std::max(rep.geometric_max_dev, dev);
        }
    }
    rep.within_cushion = rep.geometric_max_dev <= rep.cushion;
    return rep;
}

PropagationReport propagation_check(const RepellerSpec& spec, double delta,
                                    double alpha, double gamma, double eta,
                                    std::span<const int> powers,
                                    SignMode measure_sign, SignMode rotation_sign,
                                    double tau, std::size_t concat_budget) {
    PropagationReport rep;
    rep.delta = delta;
    rep.alpha = alpha;
    rep.gamma = gamma;
    rep.eta = eta;

    WordCountParams base_params;
    base_params.alpha = alpha;
    base_params.gamma = gamma;
    base_params.eta = eta;
    base_params.tau = tau;
    base_params.measure_sign = measure_sign;
    base_params.rotation_sign = rotation_sign;
    base_params.weights = WordWeights::surrogate;
    base_params.keep_items = true;

    const WordCountResult base = word_count(spec, delta, base_params);
    rep.base_count = base.count;

    std::vector<Word> base_words;
    for (const WordItem& it : base.items)
        if (it.passed) base_words.push_back(it.word);

    const std::vector<double> letter_w = spec.surrogate_letter_measures();
    for (int n : powers) {
        PropagationPower pw;
        pw.n = n;
        const double deep_delta = std::pow(delta, n);
        WordCountParams deep_params = base_params;
        deep_params.eta = 2.0 * eta;
        deep_params.tau = std::min(0.4, tau * 8.0 + 1e-9 * n);
        deep_params.keep_items = false;
        const WordCountResult deep = word_count(spec, deep_delta, deep_params);
        pw.count_deep = deep.count;
        pw.base_power = std::pow(static_cast<double>(base.count), n);

        // explicit concatenation: all n-tuples of accepted base words give
        // distinct concatenations passing the widened window
        pw.concat_distinct = 0;
        pw.concat_all_pass = true;
        double tuples = std::pow(static_cast<double>(base_words.size()), n);
        if (tuples <= static_cast<double>(concat_budget) && !base_words.empty()) {
            std::set<Word> seen;
            std::vector<std::size_t> idx(n, 0);
            const double log_deep = std::log(deep_delta);
            while (true) {
                Word w;
                for (int q = 0; q < n; ++q)
                    w = concat(w, base_words[idx[q]]);
                seen.insert(w);
                double log_omega = 0.0;
                for (int l : w) log_omega += std::log(letter_w[l]);
                const bool pass =
                    measure_passes(log_omega, log_deep, alpha, 2.0 * eta,
                                   measure_sign) &&
                    rotation_passes(spec.angle_sum(w), log_deep, gamma,
                                    2.0 * eta, rotation_sign) &&
                    spec.admissible(w);
                if (!pass) pw.concat_all_pass = false;
                int carry = n - 1;
                while (carry >= 0 && ++idx[carry] == base_words.size()) {
                    idx[carry] = 0;
                    --carry;
                }
                if (carry < 0) break;
            }
            pw.concat_distinct = seen.size();
        }
        pw.holds = static_cast<double>(pw.count_deep) >= pw.base_power;
        rep.holds = rep.holds && pw.holds;
        rep.powers.push_back(pw);
    }
    return rep;
}

FiniteScaleReport finite_scale_spectrum(const RepellerSpec& spec, double delta0,
                                        double alpha, double gamma, double eta,
                                        std::span<const int> powers,
                                        SignMode measure_sign,
                                        SignMode rotation_sign) {
    FiniteScaleReport rep;
    rep.delta0 = delta0;
    rep.eta0 = eta;

    WordCountParams params;
    params.alpha = alpha;
    params.gamma = gamma;
    params.eta = eta;
    params.tau = 1e-9;
    params.measure_sign = measure_sign;
    params.rotation_sign = rotation_sign;
    params.weights = WordWeights::surrogate;

    const WordCountResult base = word_count(spec, delta0, params);
    rep.base_exponent = base.count == 0
                            ? 0.0
                            : std::log(static_cast<double>(base.count)) /
                                  std::log(1.0 / delta0);
    rep.min_deeper_exponent = std::numeric_limits<double>::infinity();
    for (int n : powers) {
        WordCountParams deep = params;
        deep.eta = 2.0 * eta;
        deep.tau = 1e-6;
        const double dd = std::pow(delta0, n);
        const WordCountResult r = word_count(spec, dd, deep);
        const double e = r.count == 0 ? 0.0
                                      : std::log(static_cast<double>(r.count)) /
                                            std::log(1.0 / dd);
        rep.deeper.emplace_back(n, e);
        rep.min_deeper_exponent = std::min(rep.min_deeper_exponent, e);
    }
    return rep;
}

}  // namespace qdlab
