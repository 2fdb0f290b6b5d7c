// Command-line front end: reproducible spectra runs and lemma verification
// over quasidisk prefractals and atlas domains. Every MC command requires a
// seed; outputs embed the effective configuration.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>

#include "qdlab/atlas.hpp"
#include "qdlab/config.hpp"
#include "qdlab/harmonic.hpp"
#include "qdlab/repeller.hpp"
#include "qdlab/rotation.hpp"
#include "qdlab/spectra.hpp"
#include "qdlab/verifier.hpp"

using namespace qdlab;
using nlohmann::json;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out;
    std::string format = "csv";
    std::string preset = "koch";
    double twist = 0.15;
    int generation = 6;
    std::int64_t walks = 100000;
    std::int64_t seed = -1;
    unsigned threads = 0;
    bool verbose_items = false;
};

Config load_config(const CommonArgs& a) {
    Config cfg;
    if (!a.config_path.empty()) cfg = Config::from_file(a.config_path);
    return cfg;
}

RepellerSpec preset_spec(const std::string& name, double twist) {
    if (name == "koch") return koch_spec();
    if (name == "twisted_koch") return twisted_koch_spec(twist);
    if (name == "carleson_linear") return carleson_linear_spec();
    throw ConfigError("unknown preset: " + name +
                      " (expected koch | twisted_koch | carleson_linear)");
}

std::uint64_t require_seed(const CommonArgs& a, Config& cfg) {
    if (a.seed >= 0) return static_cast<std::uint64_t>(a.seed);
    if (cfg.has("seed")) return static_cast<std::uint64_t>(cfg.require_int("seed"));
    throw ConfigError("MC commands require --seed (or seed= in the config)");
}

struct Lab {
    PrefractalDomain dom;
    BoundaryIndex index;
    WalkBatch batch;
    HitPointGrid grid;
    RotationEngine engine;
};

Lab make_lab(const RepellerSpec& spec, int gen, std::uint64_t walks,
             std::uint64_t seed, unsigned threads, bool points, int depth) {
    PrefractalDomain dom = generate_prefractal(spec, gen);
    BoundaryIndex index(dom.boundary());
    WalkConfig cfg;
    cfg.eps_hit =
        default_eps_hit(std::pow(1.0 / spec.expansion_rate(), depth));
    cfg.seed = seed;
    cfg.threads = threads;
    cfg.record_points = points;
    WalkBatch batch(index, dom.basepoint(), walks, cfg);
    HitPointGrid grid(batch, dom.boundary().bbox());
    RotationEngine engine(dom.jordan(), index);
    return {std::move(dom), std::move(index), std::move(batch),
            std::move(grid), std::move(engine)};
}

void emit(const CommonArgs& a, const Config& cfg,
          const std::vector<std::string>& header,
          const std::vector<std::vector<std::string>>& rows,
          const json& extra = json::object()) {
    if (a.format == "json") {
        json out;
        out["version"] = kVersion;
        out["schema_version"] = 1;
        out["config"] = json::object();
        for (const auto& [k, v] : cfg.effective()) out["config"][k] = v;
        out["columns"] = header;
        out["rows"] = rows;
        for (const auto& [k, v] : extra.items()) out[k] = v;
        if (a.out.empty()) {
            std::cout << out.dump(2) << "\n";
        } else {
            std::ofstream f(a.out);
            f << out.dump(2) << "\n";
        }
        return;
    }
    if (a.out.empty()) {
        for (std::size_t i = 0; i < header.size(); ++i)
            std::cout << (i ? "," : "") << header[i];
        std::cout << "\n";
        for (const auto& r : rows) {
            for (std::size_t i = 0; i < r.size(); ++i)
                std::cout << (i ? "," : "") << csv_escape(r[i]);
            std::cout << "\n";
        }
    } else {
        write_csv(a.out, cfg.effective(), header, rows);
    }
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

int run_gen(CommonArgs& a) {
    Config cfg = load_config(a);
    const RepellerSpec spec = preset_spec(a.preset, a.twist);
    const PrefractalDomain dom = generate_prefractal(spec, a.generation);
    cfg.set("command", "gen");
    cfg.set("preset", a.preset);
    cfg.set("generation", std::to_string(a.generation));
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"vertex_count",
                    std::to_string(dom.boundary().vertex_count())});
    rows.push_back({"arc_segments", std::to_string(dom.arc_segment_count())});
    rows.push_back({"expansion_rate", fmt(spec.expansion_rate())});
    rows.push_back({"moran_dimension", fmt(spec.moran_dimension())});
    const double khat = dilatation_estimate(dom.boundary(), 2000, 1);
    rows.push_back({"dilatation_estimate", fmt(khat)});
    emit(a, cfg, {"key", "value"}, rows);
    return 0;
}

int run_measure(CommonArgs& a, int depth) {
    Config cfg = load_config(a);
    const std::uint64_t seed = require_seed(a, cfg);
    const RepellerSpec spec = preset_spec(a.preset, a.twist);
    depth = std::min(depth, a.generation);
    Lab lab = make_lab(spec, a.generation, a.walks, seed, a.threads, false, depth);
    cfg.set("command", "measure");
    cfg.set("preset", a.preset);
    cfg.set("generation", std::to_string(a.generation));
    cfg.set("walks", std::to_string(a.walks));
    cfg.set("seed", std::to_string(seed));
    cfg.set("depth", std::to_string(depth));

    // histogram export: segment id, depth-d word, hits
    std::vector<std::vector<std::string>> rows;
    const auto& hits = lab.batch.segment_hits();
    const auto [arc_first, arc_last] = lab.dom.arc_boundary_range();
    for (std::uint32_t s = 0; s < hits.size(); ++s) {
        if (hits[s] == 0) continue;
        std::string word = "-";
        if (s >= arc_first && s < arc_last) {
            // arc position of this boundary segment
            const std::size_t m = lab.dom.arc_segment_count();
            std::size_t pos = 0;
            for (std::size_t i = 0; i < m; ++i)
                if (lab.dom.boundary_segment_of_arc(i) == s) {
                    pos = i;
                    break;
                }
            std::uint64_t block = 1;
            for (int l = 0; l < lab.dom.generation() - depth; ++l)
                block *= spec.alphabet();
            std::uint64_t value = pos / block;
            Word w(depth);
            for (int l = depth - 1; l >= 0; --l) {
                w[l] = static_cast<int>(value % spec.alphabet());
                value /= spec.alphabet();
            }
            word = word_to_string(w);
        }
        rows.push_back({std::to_string(s), word, std::to_string(hits[s])});
    }
    emit(a, cfg, {"segment", "word", "hits"}, rows);
    return 0;
}

int run_rotate(CommonArgs& a, const std::string& word_str, double delta) {
    Config cfg = load_config(a);
    const RepellerSpec spec = preset_spec(a.preset, a.twist);
    cfg.set("command", "rotate");
    cfg.set("preset", a.preset);
    cfg.set("generation", std::to_string(a.generation));
    std::vector<std::vector<std::string>> rows;
    if (!word_str.empty()) {
        const Word w = word_from_string(word_str);
        const RotationValue sym = rot_symbolic(spec, w);
        rows.push_back({"symbolic_log_rot", fmt(sym.log_rot), "0"});
        const PrefractalDomain dom = generate_prefractal(spec, a.generation);
        const BoundaryIndex index(dom.boundary());
        const RotationEngine engine(dom.jordan(), index);
        const RotationValue geo =
            engine.rot_crosscut(dom.cylinder_arc(dom.cylinder(w)));
        rows.push_back({"geometric_log_rot", fmt(geo.log_rot),
                        fmt(geo.additive_error_bound)});
    } else {
        const PrefractalDomain dom = generate_prefractal(spec, a.generation);
        const BoundaryIndex index(dom.boundary());
        const RotationEngine engine(dom.jordan(), index);
        // rot at the arc midpoint vertex with the given delta
        const auto& arc = dom.arc_vertices();
        const RotationValue v = engine.rot_point(arc[arc.size() / 2], delta);
        rows.push_back({"log_rot", fmt(v.log_rot), fmt(v.additive_error_bound)});
    }
    emit(a, cfg, {"quantity", "value", "error_bound"}, rows);
    return 0;
}

int run_pack(CommonArgs& a, std::vector<double> deltas, double alpha,
             double gamma, double eta, const std::string& signs,
             const std::string& rot_mode) {
    Config cfg = load_config(a);
    const std::uint64_t seed = require_seed(a, cfg);
    const RepellerSpec spec = preset_spec(a.preset, a.twist);
    cfg.set("command", "pack");
    cfg.set("preset", a.preset);
    cfg.set("generation", std::to_string(a.generation));
    cfg.set("walks", std::to_string(a.walks));
    cfg.set("seed", std::to_string(seed));
    cfg.set("alpha", fmt(alpha));
    cfg.set("gamma", fmt(gamma));
    cfg.set("eta", fmt(eta));
    cfg.set("signs", signs);
    cfg.set("rot", rot_mode);

    Lab lab = make_lab(spec, a.generation, a.walks, seed, a.threads, true,
                       a.generation);
    PackingParams p;
    p.alpha = alpha;
    p.gamma = gamma;
    p.eta = eta;
    p.measure_sign = sign_mode_from_string(signs);
    p.rotation_sign = p.measure_sign;
    p.rot_weights = rot_mode == "symbolic" ? RotWeights::symbolic
                                           : RotWeights::geometric;
    p.keep_items = a.verbose_items;

    std::vector<std::vector<std::string>> rows;
    std::vector<std::pair<double, double>> fit_rows;
    for (double delta : deltas) {
        const PackingResult r = packing_count(lab.dom, lab.index, lab.batch,
                                              lab.grid, &lab.engine, delta, p);
        rows.push_back({fmt(delta), std::to_string(r.count)});
        fit_rows.emplace_back(delta, static_cast<double>(r.count));
        if (a.verbose_items) {
            for (const PackingItem& it : r.items)
                rows.push_back({fmt(delta), std::to_string(r.count),
                                fmt(it.center.real()), fmt(it.center.imag()),
                                fmt(it.omega), fmt(it.omega_se),
                                fmt(it.log_rot), it.passed ? "1" : "0"});
        }
    }
    json extra;
    if (fit_rows.size() >= 3) {
        const ExponentFit fit = fit_exponent(fit_rows);
        extra["fitted_exponent"] = fit.slope;
        extra["fit_residual_rms"] = fit.residual_rms;
        cfg.set("fitted_exponent", fmt(fit.slope));
    }
    emit(a, cfg,
         a.verbose_items
             ? std::vector<std::string>{"delta", "count", "x", "y", "omega",
                                        "omega_se", "log_rot", "passed"}
             : std::vector<std::string>{"delta", "count"},
         rows, extra);
    return 0;
}

int run_words(CommonArgs& a, std::vector<double> deltas, double alpha,
              double gamma, double eta, double tau, const std::string& signs,
              const std::string& weights) {
    Config cfg = load_config(a);
    const RepellerSpec spec = preset_spec(a.preset, a.twist);
    cfg.set("command", "words");
    cfg.set("preset", a.preset);
    cfg.set("alpha", fmt(alpha));
    cfg.set("gamma", fmt(gamma));
    cfg.set("eta", fmt(eta));
    cfg.set("tau", fmt(tau));
    cfg.set("signs", signs);
    cfg.set("weights", weights);

    WordCountParams p;
    p.alpha = alpha;
    p.gamma = gamma;
    p.eta = eta;
    p.tau = tau;
    p.measure_sign = sign_mode_from_string(signs);
    p.rotation_sign = p.measure_sign;
    p.weights =
        weights == "mc" ? WordWeights::mc : WordWeights::surrogate;
    p.keep_items = a.verbose_items;

    std::optional<Lab> lab;
    if (p.weights == WordWeights::mc) {
        const std::uint64_t seed = require_seed(a, cfg);
        cfg.set("walks", std::to_string(a.walks));
        cfg.set("seed", std::to_string(seed));
        cfg.set("generation", std::to_string(a.generation));
        lab.emplace(make_lab(spec, a.generation, a.walks, seed, a.threads,
                             false, a.generation));
    }

    std::vector<std::vector<std::string>> rows;
    std::vector<std::pair<double, double>> fit_rows;
    for (double delta : deltas) {
        const WordCountResult r =
            lab ? word_count(spec, delta, p, &lab->dom, &lab->batch,
                             &lab->engine)
                : word_count(spec, delta, p);
        rows.push_back({fmt(delta), std::to_string(r.count),
                        std::to_string(r.enumerated)});
        fit_rows.emplace_back(delta, static_cast<double>(r.count));
        if (a.verbose_items)
            for (const WordItem& it : r.items)
                rows.push_back({fmt(delta), word_to_string(it.word),
                                fmt(it.log_omega), fmt(it.log_rot),
                                it.passed ? "1" : "0"});
    }
    json extra;
    if (fit_rows.size() >= 3) {
        const ExponentFit fit = fit_exponent(fit_rows);
        extra["fitted_exponent"] = fit.slope;
        cfg.set("fitted_exponent", fmt(fit.slope));
    }
    emit(a, cfg, {"delta", "count", "enumerated"}, rows, extra);
    return 0;
}

int run_crosscuts(CommonArgs& a, std::vector<double> rs, double aa, double bb,
                  double window_factor, const std::string& weights) {
    Config cfg = load_config(a);
    const RepellerSpec spec = preset_spec(a.preset, a.twist);
    cfg.set("command", "crosscuts");
    cfg.set("preset", a.preset);
    cfg.set("a", fmt(aa));
    cfg.set("b", fmt(bb));
    cfg.set("window_factor", fmt(window_factor));
    cfg.set("weights", weights);

    CrosscutParams p;
    p.a = aa;
    p.b = bb;
    p.window_factor = window_factor;
    p.weights = weights == "mc" ? WordWeights::mc : WordWeights::surrogate;
    p.keep_items = a.verbose_items;

    std::optional<Lab> lab;
    if (p.weights == WordWeights::mc) {
        const std::uint64_t seed = require_seed(a, cfg);
        cfg.set("walks", std::to_string(a.walks));
        cfg.set("seed", std::to_string(seed));
        lab.emplace(make_lab(spec, a.generation, a.walks, seed, a.threads,
                             false, a.generation));
    }

    std::vector<std::vector<std::string>> rows;
    for (double r : rs) {
        const CrosscutResult res =
            lab ? crosscut_count(spec, r, p, &lab->dom, &lab->batch)
                : crosscut_count(spec, r, p);
        rows.push_back({fmt(r), std::to_string(res.count),
                        std::to_string(res.count_paper_window),
                        res.window_empty ? "1" : "0"});
    }
    emit(a, cfg, {"r", "count", "count_paper_window", "window_empty"}, rows);
    return 0;
}

int run_distortion(CommonArgs& a, std::vector<double> rs, double aa, double bb,
                   double eta, const std::string& atlas_kind, double alpha,
                   double beta) {
    Config cfg = load_config(a);
    const std::uint64_t seed = require_seed(a, cfg);
    cfg.set("command", "distortion");
    cfg.set("a", fmt(aa));
    cfg.set("b", fmt(bb));
    cfg.set("eta", fmt(eta));
    cfg.set("walks", std::to_string(a.walks));
    cfg.set("seed", std::to_string(seed));

    std::optional<JordanDomain> atlas_dom;
    std::optional<PrefractalDomain> pre;
    if (!atlas_kind.empty()) {
        cfg.set("atlas", atlas_kind);
        AtlasDomain ad = atlas_kind == "disk" ? AtlasDomain::disk()
                         : atlas_kind == "wedge"
                             ? AtlasDomain::wedge(alpha)
                             : AtlasDomain::spiral_wedge(alpha, beta);
        atlas_dom = ad.boundary_domain();
    } else {
        cfg.set("preset", a.preset);
        cfg.set("generation", std::to_string(a.generation));
        pre.emplace(generate_prefractal(preset_spec(a.preset, a.twist),
                                        a.generation));
    }
    const JordanDomain& dom = atlas_dom ? *atlas_dom : pre->jordan();
    const BoundaryIndex index(dom.boundary);
    WalkConfig wc;
    wc.eps_hit = default_eps_hit(1e-3 * dom.boundary.bbox().diameter());
    wc.seed = seed;
    wc.threads = a.threads;
    const WalkBatch batch(index, dom.basepoint, a.walks, wc);
    const RotationEngine engine(dom, index);

    DistortionParams p;
    p.a = aa;
    p.b = bb;
    p.eta = eta;
    p.keep_items = a.verbose_items;

    std::vector<std::vector<std::string>> rows;
    for (double r : rs) {
        const DistortionResult res = distortion_count(index, batch, engine, r, p);
        rows.push_back({fmt(r), std::to_string(res.count),
                        std::to_string(res.arcs), fmt(res.lambda_fraction),
                        fmt(res.lambda_length), fmt(res.d_exponent)});
    }
    emit(a, cfg,
         {"r", "count", "arcs", "lambda_fraction", "lambda_length",
          "d_exponent"},
         rows);
    return 0;
}

int run_verify(CommonArgs& a, const std::string& lemma, bool surrogate) {
    Config cfg = load_config(a);
    cfg.set("command", "verify " + lemma);
    cfg.set("preset", a.preset);
    const RepellerSpec spec = preset_spec(a.preset, a.twist);
    const auto t0 = std::chrono::steady_clock::now();

    VerificationReport report;
    report.lemma_id = lemma;

    if (lemma == "carleson") {
        const PrefractalDomain dom = generate_prefractal(spec, a.generation);
        const int yl[] = {1, 2, 3, 4};
        if (surrogate) {
            const CarlesonScanReport rep =
                carleson_ratio_scan(dom, nullptr, yl, 12, 1);
            double worst = 0;
            for (const auto& c : rep.cases) worst = std::max(worst, c.dev);
            report.passed = worst <= 1e-12;
            report.metrics.emplace_back("worst_dev", worst);
        } else {
            const std::uint64_t seed = require_seed(a, cfg);
            report.seed = seed;
            Lab lab = make_lab(spec, a.generation, a.walks, seed, a.threads,
                               false, 6);
            const CarlesonScanReport rep =
                carleson_ratio_scan(lab.dom, &lab.batch, yl, 12, seed + 1, 0.25);
            for (std::size_t i = 0; i < rep.y_lengths.size(); ++i) {
                report.metrics.emplace_back(
                    "mean_dev_Y" + std::to_string(rep.y_lengths[i]),
                    rep.mean_dev[i]);
                report.metrics.emplace_back(
                    "se_of_mean_Y" + std::to_string(rep.y_lengths[i]),
                    rep.se_of_mean[i]);
            }
            report.metrics.emplace_back("decay_rate", rep.decay_rate);
            report.passed = rep.mean_dev[3] + 2 * rep.se_of_mean[3] <
                            rep.mean_dev[0] - 2 * rep.se_of_mean[0];
        }
    } else if (lemma == "rotation-mult") {
        const PrefractalDomain dom = generate_prefractal(spec, a.generation);
        const BoundaryIndex index(dom.boundary());
        const RotationEngine engine(dom.jordan(), index);
        const std::uint64_t seed = require_seed(a, cfg);
        report.seed = seed;
        const RotationMultReport rep = rotation_multiplicativity_scan(
            dom, surrogate ? nullptr : &engine, 50, 3, seed);
        report.metrics.emplace_back("symbolic_max_dev", rep.symbolic_max_dev);
        report.metrics.emplace_back("geometric_max_dev", rep.geometric_max_dev);
        report.metrics.emplace_back("cushion", rep.cushion);
        report.passed = rep.symbolic_max_dev <= 1e-12 && rep.within_cushion;
    } else if (lemma == "propagation") {
        const double delta = std::pow(3.0, -2.0);
        const int ns[] = {2, 3, 4};
        const PropagationReport rep = propagation_check(
            spec, delta, spec.moran_dimension(), -0.15, 0.10, ns,
            SignMode::plus, SignMode::plus);
        report.metrics.emplace_back("base_count",
                                    static_cast<double>(rep.base_count));
        for (const auto& pw : rep.powers) {
            report.metrics.emplace_back("count_n" + std::to_string(pw.n),
                                        static_cast<double>(pw.count_deep));
            report.metrics.emplace_back("base_power_n" + std::to_string(pw.n),
                                        pw.base_power);
        }
        report.passed = rep.holds;
    } else if (lemma == "finite-scale") {
        const int ns[] = {2, 3};
        const FiniteScaleReport rep = finite_scale_spectrum(
            spec, std::pow(3.0, -3.0), spec.moran_dimension(), -0.10, 0.15, ns,
            SignMode::plus, SignMode::plus);
        report.metrics.emplace_back("base_exponent", rep.base_exponent);
        report.metrics.emplace_back("min_deeper_exponent",
                                    rep.min_deeper_exponent);
        report.passed = rep.min_deeper_exponent >= rep.base_exponent - 1e-12;
    } else {
        throw ConfigError("unknown lemma: " + lemma);
    }
    report.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();

    std::vector<std::vector<std::string>> rows;
    for (const auto& [k, v] : report.metrics) rows.push_back({k, fmt(v)});
    rows.push_back({"passed", report.passed ? "1" : "0"});
    rows.push_back({"runtime_seconds", fmt(report.runtime_seconds)});
    json extra;
    extra["lemma"] = report.lemma_id;
    extra["passed"] = report.passed;
    emit(a, cfg, {"metric", "value"}, rows, extra);
    std::cerr << (report.passed ? "[PASS] " : "[FAIL] ") << "verify "
              << lemma << "\n";
    return report.passed ? 0 : 2;
}

int run_atlas_check(CommonArgs& a, const std::string& kind, double alpha,
                    double beta) {
    Config cfg = load_config(a);
    cfg.set("command", "atlas-check");
    cfg.set("kind", kind);
    cfg.set("alpha", fmt(alpha));
    cfg.set("beta", fmt(beta));
    const AtlasDomain dom = kind == "disk" ? AtlasDomain::disk()
                            : kind == "wedge"
                                ? AtlasDomain::wedge(alpha)
                                : AtlasDomain::spiral_wedge(alpha, beta);

    std::vector<std::vector<std::string>> rows;
    // (HM*) at a fixed tip-adjacent center; (R*) at the tip
    const double center = 0x1p-4;
    for (int k = 4; k <= 12; ++k) {
        const double len = std::ldexp(1.0, -k);
        const ImageArcProbe hm = image_arc_probe(dom, {center, len}, 256,
                                                 dom.kind() != AtlasKind::disk);
        const MainLemmaProbe r =
            main_lemma_probe(dom, {0.0, len}, std::size_t{1} << 13, 0x1p-30);
        rows.push_back({std::to_string(k), fmt(hm.proxy_abs_phi_prime),
                        fmt(hm.exact_abs_phi_prime),
                        fmt(std::log(hm.proxy_abs_phi_prime) /
                            std::log(hm.exact_abs_phi_prime)),
                        fmt(r.rot.log_rot), fmt(r.arc.exact_arg_phi_prime),
                        fmt(r.ratio_r)});
    }
    emit(a, cfg,
         {"k", "hm_proxy", "hm_exact", "hm_log_ratio", "rot_log", "arg_phi",
          "r_ratio"},
         rows);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quasidisk boundary laboratory"};
    app.require_subcommand(1);
    app.fallthrough();

    CommonArgs a;
    app.add_option("--config", a.config_path, "flat key=value config file");
    app.add_option("--out", a.out, "output path (stdout when empty)");
    app.add_option("--format", a.format, "csv | json");
    app.add_option("--threads", a.threads, "worker threads (0 = hardware)");
    app.add_flag("--verbose-items", a.verbose_items,
                 "dump per-disk / per-word diagnostics");

    const auto add_domain_opts = [&](CLI::App* cmd) {
        cmd->add_option("--preset", a.preset,
                        "koch | twisted_koch | carleson_linear");
        cmd->add_option("--twist", a.twist, "twisted_koch bias angle");
        cmd->add_option("--gen", a.generation, "prefractal generation");
        cmd->add_option("--walks", a.walks, "walk budget");
        cmd->add_option("--seed", a.seed, "RNG seed (mandatory for MC)");
    };

    auto* gen = app.add_subcommand("gen", "generate a prefractal, report stats");
    add_domain_opts(gen);

    int measure_depth = 4;
    auto* measure =
        app.add_subcommand("measure", "walk histogram with word labels");
    add_domain_opts(measure);
    measure->add_option("--depth", measure_depth, "cylinder word depth");

    std::string rot_word;
    double rot_delta = 0.05;
    auto* rotate = app.add_subcommand("rotate", "rotation of a word/point");
    add_domain_opts(rotate);
    rotate->add_option("--word", rot_word, "cylinder word, digits 1..N");
    rotate->add_option("--delta", rot_delta, "disk radius for point rotation");

    std::vector<double> deltas{0.01};
    double alpha = 1.26, gamma = 0.0, eta = 0.3, tau = 0.05;
    std::string signs = "two_sided", rot_mode = "geometric",
                weights = "surrogate";
    auto* pack = app.add_subcommand("pack", "maximal disk packing counts");
    add_domain_opts(pack);
    pack->add_option("--delta", deltas, "scale list")->delimiter(',');
    pack->add_option("--alpha", alpha, "measure exponent");
    pack->add_option("--gamma", gamma, "rotation exponent");
    pack->add_option("--eta", eta, "window width");
    pack->add_option("--signs", signs, "+ | - | two_sided");
    pack->add_option("--rot", rot_mode, "geometric | symbolic");

    auto* words = app.add_subcommand("words", "word spectrum counts");
    add_domain_opts(words);
    words->add_option("--delta", deltas, "scale list")->delimiter(',');
    words->add_option("--alpha", alpha, "measure exponent");
    words->add_option("--gamma", gamma, "rotation exponent");
    words->add_option("--eta", eta, "window width");
    words->add_option("--tau", tau, "diameter window tolerance");
    words->add_option("--signs", signs, "+ | - | two_sided");
    words->add_option("--weights", weights, "surrogate | mc");

    std::vector<double> rs{0.99};
    double cc_a = 0.0, cc_b = 0.0, window_factor = 2.0;
    auto* crosscuts = app.add_subcommand("crosscuts", "crosscut spectrum counts");
    add_domain_opts(crosscuts);
    crosscuts->add_option("--r", rs, "radius list")->delimiter(',');
    crosscuts->add_option("--a", cc_a, "diameter exponent");
    crosscuts->add_option("--b", cc_b, "rotation exponent");
    crosscuts->add_option("--window-factor", window_factor,
                          "widened omega window factor");
    crosscuts->add_option("--weights", weights, "surrogate | mc");

    std::string atlas_kind;
    double atlas_alpha = 1.0, atlas_beta = 0.2;
    auto* distortion =
        app.add_subcommand("distortion", "equal-measure arc distortion counts");
    add_domain_opts(distortion);
    distortion->add_option("--r", rs, "radius list")->delimiter(',');
    distortion->add_option("--a", cc_a, "derivative exponent");
    distortion->add_option("--b", cc_b, "rotation exponent");
    distortion->add_option("--eta", eta, "window width");
    distortion->add_option("--atlas", atlas_kind,
                           "disk | wedge | spiral (instead of a preset)");
    distortion->add_option("--alpha", atlas_alpha, "atlas wedge exponent");
    distortion->add_option("--beta", atlas_beta, "atlas spiral exponent");

    std::string lemma;
    bool surrogate = false;
    auto* verify = app.add_subcommand(
        "verify", "carleson | rotation-mult | propagation | finite-scale");
    add_domain_opts(verify);
    verify->add_option("lemma", lemma, "lemma id")->required();
    verify->add_flag("--surrogate", surrogate, "surrogate product weights");

    auto* atlas_check =
        app.add_subcommand("atlas-check", "(HM*)/(R*) probes on atlas domains");
    atlas_check->add_option("--kind", atlas_kind, "disk | wedge | spiral")
        ->required();
    atlas_check->add_option("--alpha", atlas_alpha, "wedge exponent");
    atlas_check->add_option("--beta", atlas_beta, "spiral exponent");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return run_gen(a);
        if (measure->parsed()) return run_measure(a, measure_depth);
        if (rotate->parsed()) return run_rotate(a, rot_word, rot_delta);
        if (pack->parsed())
            return run_pack(a, deltas, alpha, gamma, eta, signs, rot_mode);
        if (words->parsed())
            return run_words(a, deltas, alpha, gamma, eta, tau, signs, weights);
        if (crosscuts->parsed())
            return run_crosscuts(a, rs, cc_a, cc_b, window_factor, weights);
        if (distortion->parsed())
            return run_distortion(a, rs, cc_a, cc_b, eta, atlas_kind,
                                  atlas_alpha, atlas_beta);
        if (verify->parsed()) return run_verify(a, lemma, surrogate);
        if (atlas_check->parsed())
            return run_atlas_check(a, atlas_kind, atlas_alpha, atlas_beta);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
