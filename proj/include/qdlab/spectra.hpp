#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qdlab/harmonic.hpp"
#include "qdlab/repeller.hpp"
#include "qdlab/rotation.hpp"

namespace qdlab {

enum class SignMode { plus, minus, two_sided };

SignMode sign_mode_from_string(const std::string& s);
std::string to_string(SignMode m);

// Threshold tests in log space. delta in (0,1); a `plus` measure test is
// omega > delta^(alpha+eta), a `minus` test omega < delta^(alpha-eta), and
// two_sided is the conjunction.
bool measure_passes(double log_value, double log_delta, double alpha,
                    double eta, SignMode mode);
bool rotation_passes(double log_rot, double log_delta, double gamma, double eta,
                     SignMode mode);

enum class RotWeights { geometric, symbolic };
enum class WordWeights { mc, surrogate };

struct PackingItem {
    Complex center;
    std::size_t arc_vertex;
    double omega;
    double omega_se;
    double log_rot;
    bool passed;
};

struct PackingResult {
    std::size_t count = 0;
    double delta = 0.0;
    std::vector<PackingItem> items;  // every candidate that reached the tests
};

struct PackingParams {
    double alpha = 1.0;
    double gamma = 0.0;
    double eta = 0.3;
    SignMode measure_sign = SignMode::two_sided;
    SignMode rotation_sign = SignMode::two_sided;
    RotWeights rot_weights = RotWeights::geometric;
    bool keep_items = false;
};

// log_rot for an accepted candidate, or nullopt to reject the disk
// (ineligible geometry).
using PackingRotFn =
    std::function<std::optional<double>(std::size_t candidate, Complex center)>;

// Greedy maximal packing of delta-disks over ordered candidate centers.
PackingResult packing_count(const BoundaryIndex& index, const HitPointGrid& grid,
                            std::span<const Complex> candidates, double delta,
                            const PackingParams& p, const PackingRotFn& rot_fn);

// Repeller packing: candidates are arc vertices at spacing delta/4 in
// arclength order; rotation geometric (rot_disk) or symbolic (containing
// word at the depth where cylinders have renormalized diameter ~ delta).
PackingResult packing_count(const PrefractalDomain& dom,
                            const BoundaryIndex& index, const WalkBatch& batch,
                            const HitPointGrid& grid,
                            const RotationEngine* engine, double delta,
                            const PackingParams& p);

// Candidate centers at a given arclength spacing.
std::vector<Complex> arc_candidates(const PrefractalDomain& dom, double spacing);
std::vector<Complex> boundary_candidates(const BoundaryIndex& index,
                                         double spacing);

// Multi-indices (k_1..k_N) with prod diam(a_j)^(k_j) in
// [delta(1-tau), delta(1+tau)].
std::vector<std::vector<int>> word_index_set(const RepellerSpec& spec,
                                             double delta, double tau);

struct WordItem {
    Word word;
    double log_omega;
    double log_rot;
    bool passed;
};

struct WordCountResult {
    std::size_t count = 0;
    std::size_t enumerated = 0;
    double delta = 0.0;
    std::vector<WordItem> items;
};

struct WordCountParams {
    double alpha = 1.0;
    double gamma = 0.0;
    double eta = 0.3;
    double tau = 0.05;
    SignMode measure_sign = SignMode::two_sided;
    SignMode rotation_sign = SignMode::two_sided;
    WordWeights weights = WordWeights::surrogate;
    std::size_t max_words = 4000000;
    std::uint64_t min_hits = 16;     // mc mode: fewer hits on a cylinder throws
    int geometric_depth_cap = 6;     // mc mode: geometric rot word-length cap
    bool keep_items = false;
};

// Word spectrum count over I^delta with renormalized weights; disjointness
// is prefix-freeness in enumeration order.
WordCountResult word_count(const RepellerSpec& spec, double delta,
                           const WordCountParams& p,
                           const PrefractalDomain* dom = nullptr,
                           const WalkBatch* batch = nullptr,
                           const RotationEngine* engine = nullptr);

struct CrosscutRow {
    Word word;
    double omega;
    double renorm_diam;
    double log_rot;
    bool in_paper_window;
    bool passed;
};

struct CrosscutResult {
    std::size_t count = 0;              // widened-window count
    std::size_t count_paper_window = 0; // with the triple-log window
    bool window_empty = false;
    std::vector<CrosscutRow> items;
};

struct CrosscutParams {
    double a = 0.0;
    double b = 0.0;
    double window_factor = 2.0;  // omega in [(1-r)/W, W(1-r)]
    WordWeights weights = WordWeights::surrogate;
    std::size_t max_words = 4000000;
    bool keep_items = false;
};

// Crosscut spectrum realized over word cylinders. Requires
// logloglog(1/(1-r)) > 0.
CrosscutResult crosscut_count(const RepellerSpec& spec, double r,
                              const CrosscutParams& p,
                              const PrefractalDomain* dom = nullptr,
                              const WalkBatch* batch = nullptr);

struct DistortionArc {
    std::uint32_t seg_first;  // cyclic boundary segment range
    std::uint32_t seg_last;
    double diameter;
    double p_proxy;   // diam / (2 pi (1-r)), the |phi'| proxy
    double log_rot;   // crosscut rotation of the arc
    bool passed;
};

struct DistortionResult {
    std::size_t arcs = 0;
    std::size_t count = 0;
    double lambda_fraction = 0.0;   // count / arcs
    double lambda_length = 0.0;     // 2 pi (1-r) count (raw length units)
    double d_exponent = 0.0;        // log(lambda_fraction)/log(1/(1-r)) + 1
    std::vector<DistortionArc> items;
};

struct DistortionParams {
    double a = 0.0;
    double b = 0.0;
    double eta = 0.4;
    SignMode measure_sign = SignMode::two_sided;
    SignMode rotation_sign = SignMode::two_sided;
    bool keep_items = false;
};

// Equal-harmonic-measure partition of the boundary into ceil(1/(1-r)) arcs
// from hit quantiles; arcs filtered by |phi'| and rotation proxies.
DistortionResult distortion_count(const BoundaryIndex& index,
                                  const WalkBatch& batch,
                                  const RotationEngine& engine, double r,
                                  const DistortionParams& p);

struct ExponentFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual_rms = 0.0;
    std::size_t used = 0;
    std::size_t dropped = 0;  // rows with nonpositive counts
};

// Least-squares slope of log(count) against log(1/scale).
ExponentFit fit_exponent(std::span<const std::pair<double, double>> rows);

}  // namespace qdlab
