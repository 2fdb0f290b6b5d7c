#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qdlab/spectra.hpp"

namespace qdlab {

struct VerificationReport {
    std::string lemma_id;
    bool passed = false;
    std::vector<std::pair<std::string, double>> metrics;
    std::vector<std::string> notes;
    std::uint64_t seed = 0;
    double runtime_seconds = 0.0;
};

struct CarlesonCase {
    Word x, y, z;
    double omega_xyz, omega_xy, omega_y, omega_yz;
    double dev;     // |omega(XYZ) omega(Y) / (omega(XY) omega(YZ)) - 1|
    double dev_se;  // first-order propagated MC error
};

struct CarlesonScanReport {
    std::vector<CarlesonCase> cases;
    std::vector<int> y_lengths;
    std::vector<double> mean_dev;     // per y length
    std::vector<double> mean_se;      // average per-case propagated se
    std::vector<double> se_of_mean;   // mean_se / sqrt(cases): the error bar
    double decay_rate = 0.0;          // slope of log(mean dev) vs (|Y|-1)
    bool surrogate = false;
};

// Refined Carleson multiplicativity scan. With a batch, cylinder measures
// come from the shared histogram; without one the surrogate product weights
// are used and the deviation vanishes identically.
CarlesonScanReport carleson_ratio_scan(const PrefractalDomain& dom,
                                       const WalkBatch* batch,
                                       std::span<const int> y_lengths,
                                       std::size_t triples_per_length,
                                       std::uint64_t seed,
                                       double max_rel_se = 0.02);

struct RotationMultCase {
    Word x, y;
    double dev;  // |lr(XY) - lr(X) - lr(Y) + lr(last letter of X)|
};

struct RotationMultReport {
    double symbolic_max_dev = 0.0;  // over the same pairs
    std::vector<RotationMultCase> geometric_cases;
    double geometric_max_dev = 0.0;
    double cushion = 0.0;  // 2 * (sum of the four method error bounds)
    bool within_cushion = true;
};

RotationMultReport rotation_multiplicativity_scan(const PrefractalDomain& dom,
                                                  const RotationEngine* engine,
                                                  std::size_t pairs,
                                                  int word_length,
                                                  std::uint64_t seed);

struct PropagationPower {
    int n;
    std::size_t count_deep;       // N_word(delta^n, alpha, gamma, 2 eta)
    double base_power;            // N_word(delta, eta)^n
    std::size_t concat_distinct;  // distinct n-fold concatenations
    bool concat_all_pass;         // every concatenation passes at (delta^n, 2 eta)
    bool holds;                   // count_deep >= base_power
};

struct PropagationReport {
    double delta, alpha, gamma, eta;
    std::size_t base_count = 0;
    std::vector<PropagationPower> powers;
    bool holds = true;
};

// Exact super-multiplicativity of filtered word counts under surrogate
// weights: N_word(delta^n, 2 eta) >= N_word(delta, eta)^n, checked by direct
// enumeration and by explicit concatenation.
PropagationReport propagation_check(const RepellerSpec& spec, double delta,
                                    double alpha, double gamma, double eta,
                                    std::span<const int> powers,
                                    SignMode measure_sign = SignMode::plus,
                                    SignMode rotation_sign = SignMode::plus,
                                    double tau = 1e-9,
                                    std::size_t concat_budget = 2000000);

struct FiniteScaleReport {
    double delta0, eta0;
    double base_exponent = 0.0;
    std::vector<std::pair<int, double>> deeper;  // n, exponent at delta0^n
    double min_deeper_exponent = 0.0;
};

// Finite-scale spectrum approximation: the exponent at delta0 is not
// undercut at deeper scales delta0^n (surrogate weights: exact mechanism).
FiniteScaleReport finite_scale_spectrum(const RepellerSpec& spec, double delta0,
                                        double alpha, double gamma, double eta,
                                        std::span<const int> powers,
                                        SignMode measure_sign = SignMode::plus,
                                        SignMode rotation_sign = SignMode::plus);

}  // namespace qdlab
