// corrseek: find outlier-correlated column pairs in subquadratic time.
//
// Subcommands: generate, detect, lightbulb, parity, ov, curves,
// concentration. Exit codes: 0 success, 1 usage error, 2 mark-cap abort,
// 3 no result.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "corrseek/apps.hpp"
#include "corrseek/corrjoin.hpp"
#include "corrseek/io.hpp"
#include "corrseek/params.hpp"
#include "corrseek/rng.hpp"
#include "corrseek/tradeoff.hpp"
#include "corrseek/workbench.hpp"

using json = nlohmann::ordered_json;
using namespace corrseek;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitMarkCap = 2;
constexpr int kExitNoResult = 3;

uint64_t seed_or_env(std::optional<uint64_t> seed) {
    if (seed) return *seed;
    if (const char* env = std::getenv("CORRSEEK_SEED")) {
        return std::stoull(env);
    }
    return 0;
}

void set_workers(int64_t workers) {
#ifdef _OPENMP
    if (workers > 0) omp_set_num_threads(static_cast<int>(workers));
#else
    (void)workers;
#endif
}

json params_echo(const Parameters& p) {
    json j;
    j["mode"] = p.mode == ParamMode::Asymptotic ? "asymptotic" : "explicit";
    j["rho"] = p.rho;
    j["tau"] = p.tau;
    j["gamma"] = p.gamma;
    j["delta"] = p.delta_cap;
    if (p.kappa) j["kappa"] = *p.kappa;
    j["t"] = p.t;
    j["p"] = p.p;
    j["s"] = p.s;
    j["iterations"] = p.iterations;
    j["threshold_constant"] = p.threshold_constant;
    j["mark_cap"] = p.mark_cap;
    return j;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error(path + ": cannot open for writing");
    os << text;
}

void write_pairs(const std::string& path, const std::vector<OutlierPair>& pairs) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error(path + ": cannot open for writing");
    for (const OutlierPair& pr : pairs) {
        os << pr.j1 << ' ' << pr.j2 << ' ' << pr.ip << '\n';
    }
}

json report_summary(const DetectionReport& rep, const Parameters& params, uint64_t seed) {
    json j;
    j["pairs"] = rep.pairs.size();
    j["any_marked"] = rep.any_marked;
    j["iteration_marks"] = rep.iteration_marks;
    j["total_marks"] = rep.total_marks();
    j["seed"] = seed;
    j["params"] = params_echo(params);
    return j;
}

// flags shared by every pipeline that runs the detector
struct ParamFlags {
    double rho = 0.0, tau = 0.0;
    double gamma = 1.0 / 3.0, delta = 1.0;
    std::optional<int64_t> t, p, s, iterations, mark_cap;
    std::optional<double> threshold_constant, kappa;

    void attach(CLI::App* cmd, bool thresholds_required) {
        auto* r = cmd->add_option("--rho", rho, "outlier threshold in (0,1]");
        auto* u = cmd->add_option("--tau", tau, "background threshold in (0,rho)");
        if (thresholds_required) {
            r->required();
            u->required();
        }
        cmd->add_option("--gamma", gamma, "tradeoff exponent in (0,1), asymptotic mode");
        cmd->add_option("--delta", delta, "tradeoff cap Delta >= 1, asymptotic mode");
        cmd->add_option("--t", t, "block size (explicit mode)");
        cmd->add_option("--p", p, "tensor power, even (explicit mode)");
        cmd->add_option("--s", s, "sample size, perfect square (explicit mode)");
        cmd->add_option("--iterations", iterations, "iteration count (explicit mode)");
        cmd->add_option("--threshold-constant", threshold_constant,
                        "marking threshold multiplier (default 1/8)");
        cmd->add_option("--mark-cap", mark_cap, "abort when one iteration marks more pairs");
        cmd->add_option("--kappa", kappa, "second-level tradeoff in (0,1): two-level listing");
    }

    void attach_overrides_only(CLI::App* cmd) {
        cmd->add_option("--t", t, "block size override");
        cmd->add_option("--p", p, "tensor power override");
        cmd->add_option("--s", s, "sample size override");
        cmd->add_option("--iterations", iterations, "iterations override");
        cmd->add_option("--threshold-constant", threshold_constant, "marking multiplier");
        cmd->add_option("--mark-cap", mark_cap, "mark cap override");
    }

    ParameterOverrides overrides() const {
        ParameterOverrides ov;
        ov.t = t;
        ov.p = p;
        ov.s = s;
        ov.iterations = iterations;
        ov.threshold_constant = threshold_constant;
        ov.mark_cap = mark_cap;
        ov.kappa = kappa;
        return ov;
    }

    Parameters build(int64_t n, int64_t d) const {
        return make_parameters(n, d, rho, tau, gamma, delta, overrides());
    }
};

json planted_json(const PlantedInstance& inst) {
    json pairs = json::array();
    for (const PlantedPair& pp : inst.planted) {
        pairs.push_back({{"j1", pp.j1}, {"j2", pp.j2}, {"ip", pp.ip}});
    }
    return pairs;
}

int cmd_generate(const std::string& kind, int64_t n, int64_t d, int64_t dprime, double rho,
                 double tau, int64_t outliers, int64_t k, double eta, double density,
                 uint64_t seed, const std::string& out, bool binary) {
    json sidecar;
    sidecar["kind"] = kind;
    sidecar["seed"] = seed;
    if (kind == "lightbulb") {
        const PlantedInstance inst = gen_lightbulb(n, d, rho, seed);
        save_pmat(inst.a, out + ".pmat", binary);
        sidecar["n"] = n;
        sidecar["d"] = d;
        sidecar["rho"] = rho;
        sidecar["planted"] = planted_json(inst);
        sidecar["pairs_at_rho"] = inst.q_observed;
        if (static_cast<double>(d) < lightbulb_unique_dim(n, rho)) {
            sidecar["warning"] = "d below 5*rho^-2*ln n; planted pair may not be unique";
        }
        sidecar["files"] = {out + ".pmat"};
    } else if (kind == "promise") {
        const PlantedInstance inst = gen_promise_instance(n, d, rho, tau, outliers, seed);
        save_pmat(inst.a, out + ".a.pmat", binary);
        save_pmat(inst.b, out + ".b.pmat", binary);
        sidecar["n"] = n;
        sidecar["d"] = d;
        sidecar["rho"] = rho;
        sidecar["tau"] = tau;
        sidecar["planted"] = planted_json(inst);
        sidecar["q_observed"] = inst.q_observed;
        sidecar["files"] = {out + ".a.pmat", out + ".b.pmat"};
    } else if (kind == "ov") {
        const OVInstance inst = gen_ov(dprime, n, density, seed);
        save_ov(inst, out + ".ov");
        sidecar["n"] = n;
        sidecar["dprime"] = dprime;
        sidecar["density"] = density;
        sidecar["files"] = {out + ".ov"};
    } else if (kind == "parity") {
        const ParityInstance inst = gen_parity(n, k, eta, d, seed);
        save_parity_examples(inst.examples, n, out + ".parity");
        sidecar["n"] = n;
        sidecar["k"] = k;
        sidecar["eta"] = eta;
        sidecar["d"] = d;
        sidecar["support"] = inst.support;
        sidecar["files"] = {out + ".parity"};
    } else {
        std::cerr << "unknown instance kind: " << kind << "\n";
        return kExitUsage;
    }
    write_text(out + ".json", sidecar.dump(2) + "\n");
    return kExitOk;
}

int cmd_detect(const std::string& a_path, const std::string& b_path, const std::string& data_path,
               const ParamFlags& flags, uint64_t seed, const std::string& out,
               const std::string& summary_path, bool no_list, bool oracle, int64_t workers) {
    set_workers(workers);
    const bool monochromatic = !data_path.empty();

    BooleanMatrix a, b;
    if (monochromatic) {
        a = load_pmat(data_path);
    } else {
        a = load_pmat(a_path);
        b = load_pmat(b_path);
    }
    const int64_t n = monochromatic ? a.cols() : std::max(a.cols(), b.cols());

    if (oracle) {
        std::vector<OutlierPair> pairs = monochromatic
                                             ? brute_force_pairs_mono(a, flags.rho)
                                             : brute_force_pairs(a, b, flags.rho);
        canonicalize(pairs);
        write_pairs(out, pairs);
        json j;
        j["mode"] = "oracle";
        j["pairs"] = pairs.size();
        j["rho"] = flags.rho;
        write_text(summary_path, j.dump(2) + "\n");
        return kExitOk;
    }

    const Parameters params = flags.build(n, a.dim());
    DetectionReport rep;
    if (no_list) {
        if (monochromatic) {
            int64_t which = 0;
            for (const SplitInstance& inst : reduce_monochromatic(a)) {
                const uint64_t sub_seed =
                    Rng::keyed(seed, {0x35171u, static_cast<uint64_t>(which++)}).next_u64();
                const DetectionReport r = run_detection(inst.a, inst.b, params, sub_seed, false);
                rep.any_marked |= r.any_marked;
                rep.iteration_marks.insert(rep.iteration_marks.end(), r.iteration_marks.begin(),
                                           r.iteration_marks.end());
            }
        } else {
            rep = run_detection(a, b, params, seed, false);
        }
    } else if (flags.kappa && monochromatic) {
        int64_t which = 0;
        for (const SplitInstance& inst : reduce_monochromatic(a)) {
            const uint64_t sub_seed =
                Rng::keyed(seed, {0x35171u, static_cast<uint64_t>(which++)}).next_u64();
            const DetectionReport r =
                find_outliers_two_level(inst.a, inst.b, params, *flags.kappa, sub_seed);
            rep.any_marked |= r.any_marked;
            rep.iteration_marks.insert(rep.iteration_marks.end(), r.iteration_marks.begin(),
                                       r.iteration_marks.end());
            for (const OutlierPair& pr : r.pairs) {
                int64_t j1 = inst.a_index[pr.j1];
                int64_t j2 = inst.b_index[pr.j2];
                if (j1 > j2) std::swap(j1, j2);
                rep.pairs.push_back({j1, j2, pr.ip});
            }
        }
        canonicalize(rep.pairs);
    } else if (flags.kappa) {
        rep = find_outliers_two_level(a, b, params, *flags.kappa, seed);
    } else {
        rep = monochromatic ? find_outliers_monochromatic(a, params, seed)
                            : find_outliers(a, b, params, seed);
    }

    if (!no_list) write_pairs(out, rep.pairs);
    json summary = report_summary(rep, params, seed);
    if (no_list) summary["decision"] = rep.any_marked;
    write_text(summary_path, summary.dump(2) + "\n");
    return kExitOk;
}

int cmd_lightbulb(const std::string& data_path, double rho, double epsilon,
                  const ParamFlags& flags, uint64_t seed, const std::string& out,
                  int64_t workers) {
    set_workers(workers);
    const BooleanMatrix data = load_pmat(data_path);
    SolverOptions opts;
    opts.epsilon = epsilon;
    opts.overrides = flags.overrides();
    const LightbulbResult got = solve_lightbulb(data, rho, opts, seed);
    json j;
    j["j1"] = got.j1;
    j["j2"] = got.j2;
    j["ip"] = got.ip;
    j["rho"] = rho;
    j["seed"] = seed;
    write_text(out, j.dump(2) + "\n");
    std::cout << got.j1 << ' ' << got.j2 << ' ' << got.ip << '\n';
    return kExitOk;
}

int cmd_parity(const std::string& examples_path, int64_t k, double eta, double epsilon,
               const std::string& more_from, int64_t retry_cap, const ParamFlags& flags,
               uint64_t seed, const std::string& out, int64_t workers) {
    set_workers(workers);
    int64_t n = 0;
    std::vector<ParityExample> examples = load_parity_examples(examples_path, n);

    ExampleSource source = nullptr;
    if (!more_from.empty()) {
        if (more_from.rfind("generator:", 0) == 0) {
            // generator:<sidecar.json> redraws from the instance's hidden support
            const std::string sidecar_path = more_from.substr(10);
            std::ifstream is(sidecar_path);
            if (!is) throw std::runtime_error(sidecar_path + ": cannot open");
            json sidecar = json::parse(is);
            const std::vector<int32_t> support =
                sidecar.at("support").get<std::vector<int32_t>>();
            const double gen_eta = sidecar.at("eta").get<double>();
            const int64_t gen_n = sidecar.at("n").get<int64_t>();
            auto counter = std::make_shared<uint64_t>(0);
            source = [support, gen_eta, gen_n, seed, counter](int64_t count) {
                return gen_parity_examples(support, gen_n, gen_eta, count,
                                           Rng::keyed(seed, {0xE6A11u, ++*counter}).next_u64());
            };
        } else {
            // a file of spare examples, consumed batch by batch
            int64_t spare_n = 0;
            auto spare = std::make_shared<std::vector<ParityExample>>(
                load_parity_examples(more_from, spare_n));
            if (spare_n != n) throw std::runtime_error("--more-examples-from: n mismatch");
            auto offset = std::make_shared<size_t>(0);
            source = [spare, offset](int64_t count) {
                std::vector<ParityExample> batch;
                while (count-- > 0 && *offset < spare->size()) {
                    batch.push_back((*spare)[(*offset)++]);
                }
                return batch;
            };
        }
    }

    SolverOptions opts;
    opts.epsilon = epsilon;
    opts.retry_cap = retry_cap;
    opts.overrides = flags.overrides();
    const std::vector<int32_t> support = solve_parity(examples, n, k, eta, opts, source, seed);
    json j;
    j["support"] = support;
    j["k"] = k;
    j["eta"] = eta;
    j["seed"] = seed;
    write_text(out, j.dump(2) + "\n");
    for (size_t i = 0; i < support.size(); ++i) {
        std::cout << support[i] << (i + 1 < support.size() ? ' ' : '\n');
    }
    return kExitOk;
}

int cmd_ov(const std::string& instance_path, int64_t presample, const ParamFlags& flags,
           uint64_t seed, const std::string& out, int64_t workers) {
    set_workers(workers);
    const OVInstance inst = load_ov(instance_path);
    SolverOptions opts;
    opts.presample_pairs = presample;
    opts.overrides = flags.overrides();
    const OVResult got = solve_ov(inst, opts, seed);
    json j;
    j["orthogonal_pair_exists"] = got.found;
    if (got.found) {
        j["j1"] = got.j1;
        j["j2"] = got.j2;
    }
    j["seed"] = seed;
    write_text(out, j.dump(2) + "\n");
    std::cout << (got.found ? "true" : "false") << '\n';
    return got.found ? kExitOk : kExitNoResult;
}

int cmd_curves(const std::string& out, int64_t points, std::optional<double> omega,
               std::optional<double> alpha) {
    std::vector<double> grid;
    grid.reserve(static_cast<size_t>(points));
    for (int64_t i = 0; i < points; ++i) {
        grid.push_back(static_cast<double>(i) / static_cast<double>(points));
    }
    if (omega || alpha) {
        ExponentModel model;
        if (omega) model.omega = *omega;
        if (alpha) model.alpha = *alpha;
        if (!model.consistent()) {
            std::cerr << "corrseek: warning: omega > 3 - alpha is inconsistent with the "
                         "rectangular exponent's definition; curves emitted anyway\n";
        }
        std::ofstream os(out + ".csv");
        emit_curves(model, grid, os);
        return kExitOk;
    }
    // the two panels: quoted exponent bounds, then the idealized omega=2, alpha=1
    {
        std::ofstream os(out + ".panel1.csv");
        emit_curves(ExponentModel{2.3728639, 0.30298}, grid, os);
    }
    {
        std::ofstream os(out + ".panel2.csv");
        emit_curves(ExponentModel{2.0, 1.0}, grid, os);
    }
    return kExitOk;
}

int cmd_concentration(int64_t m, int64_t s, double xi, double eta, int64_t trials, uint64_t seed,
                      const std::string& out) {
    const ConcentrationReport rep = check_cartesian_concentration(m, s, xi, eta, trials, seed);
    json j;
    j["m"] = rep.m;
    j["s"] = rep.s;
    j["xi_requested"] = rep.xi_requested;
    j["eta_requested"] = rep.eta_requested;
    j["xi"] = rep.xi;
    j["eta"] = rep.eta;
    j["trials"] = rep.trials;
    j["upper_bound"] = rep.upper_bound;
    j["lower_bound"] = rep.lower_bound;
    j["lower_applicable"] = rep.lower_applicable;
    j["upper_violations"] = rep.upper_violations;
    j["lower_violations"] = rep.lower_violations;
    const std::string text = j.dump(2) + "\n";
    if (out.empty()) {
        std::cout << text;
    } else {
        write_text(out, text);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"corrseek: outlier correlation detection via compressed matrix products"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "write a planted instance plus a JSON sidecar");
    std::string gen_kind, gen_out = "instance";
    int64_t gen_n = 64, gen_d = 256, gen_dprime = 4, gen_outliers = 1, gen_k = 2;
    double gen_rho = 0.5, gen_tau = 0.125, gen_eta = 0.1, gen_density = 0.5;
    std::optional<uint64_t> gen_seed;
    bool gen_binary = false;
    gen->add_option("kind", gen_kind, "lightbulb | promise | ov | parity")->required();
    gen->add_option("--n", gen_n, "columns (or variables, for parity)");
    gen->add_option("--d", gen_d, "dimension (or example count, for parity)");
    gen->add_option("--dprime", gen_dprime, "0/1 dimension (ov)");
    gen->add_option("--rho", gen_rho, "outlier threshold");
    gen->add_option("--tau", gen_tau, "background threshold (promise)");
    gen->add_option("--outliers", gen_outliers, "planted pair count (promise)");
    gen->add_option("--k", gen_k, "parity support size");
    gen->add_option("--eta", gen_eta, "parity noise rate");
    gen->add_option("--density", gen_density, "ov one-density");
    gen->add_option("--seed", gen_seed, "RNG seed (falls back to CORRSEEK_SEED)");
    gen->add_option("--out", gen_out, "output path prefix");
    gen->add_flag("--binary", gen_binary, "write PMATB1 instead of PMAT1");

    // detect
    auto* det = app.add_subcommand("detect", "run the compressed detection + listing pipeline");
    std::string det_a, det_b, det_data, det_out = "results.txt", det_summary;
    std::optional<uint64_t> det_seed;
    bool det_no_list = false, det_oracle = false;
    int64_t det_workers = 0;
    ParamFlags det_flags;
    det->add_option("--a", det_a, "left PMAT file (bichromatic)");
    det->add_option("--b", det_b, "right PMAT file (bichromatic)");
    det->add_option("--data", det_data, "single PMAT file (monochromatic reduction)");
    det_flags.attach(det, true);
    det->add_option("--seed", det_seed, "RNG seed (falls back to CORRSEEK_SEED)");
    det->add_option("--out", det_out, "outlier pair listing file");
    det->add_option("--summary", det_summary, "JSON summary file (default <out>.json)");
    det->add_flag("--no-list", det_no_list, "stop after approximate detection");
    det->add_flag("--oracle", det_oracle, "bypass the algorithm, run the exact scan");
    det->add_option("--workers", det_workers, "worker thread count (default: hardware)");

    // lightbulb
    auto* lb = app.add_subcommand("lightbulb", "find the planted pair in a single matrix");
    std::string lb_data, lb_out = "lightbulb.json";
    double lb_rho = 0.5, lb_epsilon = 0.5;
    std::optional<uint64_t> lb_seed;
    int64_t lb_workers = 0;
    ParamFlags lb_flags;
    lb->add_option("--data", lb_data, "PMAT file")->required();
    lb->add_option("--rho", lb_rho, "planted correlation threshold")->required();
    lb->add_option("--epsilon", lb_epsilon, "accuracy knob in (0, omega/3)");
    lb_flags.attach_overrides_only(lb);
    lb->add_option("--seed", lb_seed, "RNG seed");
    lb->add_option("--out", lb_out, "result JSON");
    lb->add_option("--workers", lb_workers, "worker thread count");

    // parity
    auto* par = app.add_subcommand("parity", "learn a sparse parity from noisy examples");
    std::string par_examples, par_more, par_out = "parity.json";
    int64_t par_k = 2, par_retry = 8, par_workers = 0;
    double par_eta = 0.1, par_epsilon = 0.5;
    std::optional<uint64_t> par_seed;
    ParamFlags par_flags;
    par->add_option("--examples", par_examples, "PARITY1 file")->required();
    par->add_option("--k", par_k, "support size")->required();
    par->add_option("--eta", par_eta, "noise rate")->required();
    par->add_option("--epsilon", par_epsilon, "accuracy knob");
    par->add_option("--more-examples-from", par_more,
                    "generator:<sidecar.json> or a PARITY1 file of spare examples");
    par->add_option("--retry-cap", par_retry, "extra example rounds");
    par_flags.attach_overrides_only(par);
    par->add_option("--seed", par_seed, "RNG seed");
    par->add_option("--out", par_out, "result JSON");
    par->add_option("--workers", par_workers, "worker thread count");

    // ov
    auto* ov = app.add_subcommand("ov", "decide orthogonal vectors via the gadget reduction");
    std::string ov_instance, ov_out = "ov.json";
    int64_t ov_presample = 0, ov_workers = 0;
    std::optional<uint64_t> ov_seed;
    ParamFlags ov_flags;
    ov->add_option("--instance", ov_instance, "OV1 file")->required();
    ov->add_option("--presample", ov_presample, "random pairs tested before detection");
    ov_flags.attach_overrides_only(ov);
    ov->add_option("--seed", ov_seed, "RNG seed");
    ov->add_option("--out", ov_out, "result JSON");
    ov->add_option("--workers", ov_workers, "worker thread count");

    // curves
    auto* cur = app.add_subcommand("curves", "emit the exponent curves as CSV");
    std::string cur_out = "curves";
    int64_t cur_points = 101;
    std::optional<double> cur_omega, cur_alpha;
    cur->add_option("--out", cur_out, "output path prefix");
    cur->add_option("--points", cur_points, "grid points on [0,1)");
    cur->add_option("--omega", cur_omega, "square MM exponent (default: both panels)");
    cur->add_option("--alpha", cur_alpha, "rectangular MM exponent");

    // concentration
    auto* conc = app.add_subcommand("concentration", "Monte-Carlo Cartesian sampling check");
    int64_t conc_m = 10000, conc_s = 10000, conc_trials = 1000;
    double conc_xi = 0.0, conc_eta = 0.0;
    std::optional<uint64_t> conc_seed;
    std::string conc_out;
    conc->add_option("--m", conc_m, "population size (perfect square)");
    conc->add_option("--s", conc_s, "sample size (perfect square)");
    conc->add_option("--xi", conc_xi, "mean of the x side");
    conc->add_option("--eta", conc_eta, "mean of the y side");
    conc->add_option("--trials", conc_trials, "Monte-Carlo trials");
    conc->add_option("--seed", conc_seed, "RNG seed");
    conc->add_option("--out", conc_out, "JSON report file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (gen->parsed()) {
            return cmd_generate(gen_kind, gen_n, gen_d, gen_dprime, gen_rho, gen_tau,
                                gen_outliers, gen_k, gen_eta, gen_density, seed_or_env(gen_seed),
                                gen_out, gen_binary);
        }
        if (det->parsed()) {
            if (det_data.empty() && (det_a.empty() || det_b.empty())) {
                std::cerr << "detect: need --a and --b, or --data\n";
                return kExitUsage;
            }
            const std::string summary = det_summary.empty() ? det_out + ".json" : det_summary;
            return cmd_detect(det_a, det_b, det_data, det_flags, seed_or_env(det_seed), det_out,
                              summary, det_no_list, det_oracle, det_workers);
        }
        if (lb->parsed()) {
            return cmd_lightbulb(lb_data, lb_rho, lb_epsilon, lb_flags, seed_or_env(lb_seed),
                                 lb_out, lb_workers);
        }
        if (par->parsed()) {
            return cmd_parity(par_examples, par_k, par_eta, par_epsilon, par_more, par_retry,
                              par_flags, seed_or_env(par_seed), par_out, par_workers);
        }
        if (ov->parsed()) {
            return cmd_ov(ov_instance, ov_presample, ov_flags, seed_or_env(ov_seed), ov_out,
                          ov_workers);
        }
        if (cur->parsed()) {
            return cmd_curves(cur_out, cur_points, cur_omega, cur_alpha);
        }
        if (conc->parsed()) {
            return cmd_concentration(conc_m, conc_s, conc_xi, conc_eta, conc_trials,
                                     seed_or_env(conc_seed), conc_out);
        }
    } catch (const MarkCapExceeded& e) {
        std::cerr << "corrseek: " << e.what() << "\n";
        return kExitMarkCap;
    } catch (const NoPairFound& e) {
        std::cerr << "corrseek: " << e.what() << "\n";
        return kExitNoResult;
    } catch (const std::exception& e) {
        std::cerr << "corrseek: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
