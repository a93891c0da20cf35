// Python bindings for the main operations: matrix I/O, parameter
// derivation, detection + listing, the application solvers, the
// brute-force oracle and the exponent calculator.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "corrseek/apps.hpp"
#include "corrseek/corrjoin.hpp"
#include "corrseek/io.hpp"
#include "corrseek/params.hpp"
#include "corrseek/tradeoff.hpp"
#include "corrseek/workbench.hpp"

namespace py = pybind11;
using namespace corrseek;

namespace {

ParityExample example_from_py(const std::pair<std::string, int>& ex) {
    ParityExample out;
    out.x.reserve(ex.first.size());
    for (char c : ex.first) {
        if (c != '+' && c != '-') throw std::invalid_argument("entries must be + or -");
        out.x.push_back(c == '-' ? -1 : 1);
    }
    if (ex.second != 1 && ex.second != -1) throw std::invalid_argument("label must be +-1");
    out.y = static_cast<int8_t>(ex.second);
    return out;
}

std::pair<std::string, int> example_to_py(const ParityExample& ex) {
    std::string x(ex.x.size(), '+');
    for (size_t i = 0; i < ex.x.size(); ++i) {
        if (ex.x[i] == -1) x[i] = '-';
    }
    return {x, ex.y};
}

OVInstance ov_from_columns(const std::vector<std::string>& s_cols,
                           const std::vector<std::string>& t_cols) {
    if (s_cols.empty() || s_cols.size() != t_cols.size()) {
        throw std::invalid_argument("S and T need the same nonzero column count");
    }
    OVInstance inst;
    inst.dprime = static_cast<int64_t>(s_cols.front().size());
    inst.n = static_cast<int64_t>(s_cols.size());
    inst.s_entries.assign(static_cast<size_t>(inst.dprime * inst.n), 0);
    inst.t_entries.assign(static_cast<size_t>(inst.dprime * inst.n), 0);
    for (int64_t j = 0; j < inst.n; ++j) {
        const std::string& sc = s_cols[static_cast<size_t>(j)];
        const std::string& tc = t_cols[static_cast<size_t>(j)];
        if (static_cast<int64_t>(sc.size()) != inst.dprime ||
            static_cast<int64_t>(tc.size()) != inst.dprime) {
            throw std::invalid_argument("columns must share one length");
        }
        for (int64_t i = 0; i < inst.dprime; ++i) {
            inst.set_s(i, j, sc[static_cast<size_t>(i)] == '1');
            inst.set_t(i, j, tc[static_cast<size_t>(i)] == '1');
        }
    }
    return inst;
}

}  // namespace

namespace {

BooleanMatrix matrix_from_columns(const std::vector<std::string>& columns) {
    if (columns.empty()) throw std::invalid_argument("need at least one column");
    const int64_t d = static_cast<int64_t>(columns.front().size());
    BooleanMatrix m(d, static_cast<int64_t>(columns.size()));
    for (size_t j = 0; j < columns.size(); ++j) {
        if (static_cast<int64_t>(columns[j].size()) != d) {
            throw std::invalid_argument("columns must share one length");
        }
        for (int64_t i = 0; i < d; ++i) {
            const char c = columns[j][static_cast<size_t>(i)];
            if (c != '+' && c != '-') throw std::invalid_argument("entries must be + or -");
            m.set_entry(i, static_cast<int64_t>(j), c == '-' ? -1 : 1);
        }
    }
    return m;
}

std::vector<std::string> matrix_to_columns(const BooleanMatrix& m) {
    std::vector<std::string> out(static_cast<size_t>(m.cols()));
    for (int64_t j = 0; j < m.cols(); ++j) {
        std::string col(static_cast<size_t>(m.dim()), '+');
        for (int64_t i = 0; i < m.dim(); ++i) {
            if (m.entry(i, j) == -1) col[static_cast<size_t>(i)] = '-';
        }
        out[static_cast<size_t>(j)] = std::move(col);
    }
    return out;
}

Parameters params_from_kwargs(double rho, double tau, int64_t t, int64_t p, int64_t s,
                              int64_t iterations, double threshold_constant, int64_t mark_cap) {
    Parameters params = explicit_parameters(rho, tau, t, p, s, iterations);
    params.threshold_constant = threshold_constant;
    params.mark_cap = mark_cap;
    return params;
}

py::list pairs_to_list(const std::vector<OutlierPair>& pairs) {
    py::list out;
    for (const OutlierPair& pr : pairs) {
        out.append(py::make_tuple(pr.j1, pr.j2, pr.ip));
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_corrseek, m) {
    m.doc() = "Outlier correlation detection via compressed matrix products";

    py::class_<BooleanMatrix>(m, "BooleanMatrix")
        .def(py::init(&matrix_from_columns), py::arg("columns"),
             "Build from a list of column strings over {+,-}")
        .def_property_readonly("d", &BooleanMatrix::dim)
        .def_property_readonly("n", &BooleanMatrix::cols)
        .def("entry", &BooleanMatrix::entry, py::arg("i"), py::arg("j"))
        .def("columns", &matrix_to_columns)
        .def("__repr__", [](const BooleanMatrix& mm) {
            return "BooleanMatrix(d=" + std::to_string(mm.dim()) +
                   ", n=" + std::to_string(mm.cols()) + ")";
        });

    m.def("load_pmat", &load_pmat, py::arg("path"));
    m.def("save_pmat", &save_pmat, py::arg("matrix"), py::arg("path"),
          py::arg("binary") = false);

    m.def("inner_product",
          [](const BooleanMatrix& a, int64_t j1, const BooleanMatrix& b, int64_t j2) {
              return inner_product(a.col(j1), b.col(j2));
          },
          py::arg("a"), py::arg("j1"), py::arg("b"), py::arg("j2"));

    m.def("derive_block_size", &derive_block_size, py::arg("n"), py::arg("gamma"));
    m.def("derive_power", &derive_power, py::arg("t"), py::arg("n"), py::arg("rho"),
          py::arg("tau"));
    m.def("derive_sample_size", &derive_sample_size, py::arg("tau"), py::arg("p"));

    m.def(
        "find_outliers",
        [](const BooleanMatrix& a, const BooleanMatrix& b, double rho, double tau, int64_t t,
           int64_t p, int64_t s, int64_t iterations, double threshold_constant, int64_t mark_cap,
           uint64_t seed) {
            const DetectionReport rep = find_outliers(
                a, b, params_from_kwargs(rho, tau, t, p, s, iterations, threshold_constant,
                                         mark_cap),
                seed);
            py::dict out;
            out["pairs"] = pairs_to_list(rep.pairs);
            out["iteration_marks"] = rep.iteration_marks;
            out["any_marked"] = rep.any_marked;
            return out;
        },
        py::arg("a"), py::arg("b"), py::arg("rho"), py::arg("tau"), py::arg("t"), py::arg("p"),
        py::arg("s"), py::arg("iterations"), py::arg("threshold_constant") = 0.125,
        py::arg("mark_cap") = 0, py::arg("seed") = 0);

    m.def(
        "brute_force_pairs",
        [](const BooleanMatrix& a, const BooleanMatrix& b, double threshold) {
            return pairs_to_list(brute_force_pairs(a, b, threshold));
        },
        py::arg("a"), py::arg("b"), py::arg("threshold_fraction"));

    m.def(
        "gen_lightbulb",
        [](int64_t n, int64_t d, double rho, uint64_t seed) {
            const PlantedInstance inst = gen_lightbulb(n, d, rho, seed);
            py::dict out;
            out["data"] = inst.a;
            out["planted"] = py::make_tuple(inst.planted[0].j1, inst.planted[0].j2,
                                            inst.planted[0].ip);
            return out;
        },
        py::arg("n"), py::arg("d"), py::arg("rho"), py::arg("seed") = 0);

    m.def(
        "gen_promise_instance",
        [](int64_t n, int64_t d, double rho, double tau, int64_t n_outliers, uint64_t seed) {
            const PlantedInstance inst = gen_promise_instance(n, d, rho, tau, n_outliers, seed);
            py::dict out;
            out["a"] = inst.a;
            out["b"] = inst.b;
            py::list planted;
            for (const PlantedPair& pp : inst.planted) {
                planted.append(py::make_tuple(pp.j1, pp.j2, pp.ip));
            }
            out["planted"] = planted;
            out["q_observed"] = inst.q_observed;
            return out;
        },
        py::arg("n"), py::arg("d"), py::arg("rho"), py::arg("tau"), py::arg("n_outliers"),
        py::arg("seed") = 0);

    m.def(
        "solve_lightbulb",
        [](const BooleanMatrix& data, double rho, int64_t t, int64_t p, int64_t s,
           int64_t iterations, double epsilon, double threshold_constant, uint64_t seed) {
            SolverOptions opts;
            opts.epsilon = epsilon;
            opts.overrides.t = t;
            opts.overrides.p = p;
            opts.overrides.s = s;
            opts.overrides.iterations = iterations;
            opts.overrides.threshold_constant = threshold_constant;
            const LightbulbResult got = solve_lightbulb(data, rho, opts, seed);
            return py::make_tuple(got.j1, got.j2, got.ip);
        },
        py::arg("data"), py::arg("rho"), py::arg("t"), py::arg("p"), py::arg("s"),
        py::arg("iterations"), py::arg("epsilon") = 0.5, py::arg("threshold_constant") = 0.125,
        py::arg("seed") = 0);

    m.def(
        "check_cartesian_concentration",
        [](int64_t mm_, int64_t s, double xi, double eta, int64_t trials, uint64_t seed) {
            const ConcentrationReport rep =
                check_cartesian_concentration(mm_, s, xi, eta, trials, seed);
            py::dict out;
            out["trials"] = rep.trials;
            out["upper_violations"] = rep.upper_violations;
            out["lower_violations"] = rep.lower_violations;
            out["lower_applicable"] = rep.lower_applicable;
            out["xi"] = rep.xi;
            out["eta"] = rep.eta;
            return out;
        },
        py::arg("m"), py::arg("s"), py::arg("xi"), py::arg("eta"), py::arg("trials"),
        py::arg("seed") = 0);

    m.def("hamming_distance",
          [](const BooleanMatrix& a, int64_t j1, const BooleanMatrix& b, int64_t j2) {
              return hamming_distance(a.col(j1), b.col(j2));
          },
          py::arg("a"), py::arg("j1"), py::arg("b"), py::arg("j2"));

    m.def(
        "brute_force_pairs_mono",
        [](const BooleanMatrix& data, double threshold) {
            return pairs_to_list(brute_force_pairs_mono(data, threshold));
        },
        py::arg("data"), py::arg("threshold_fraction"));

    m.def(
        "find_outliers_monochromatic",
        [](const BooleanMatrix& data, double rho, double tau, int64_t t, int64_t p, int64_t s,
           int64_t iterations, double threshold_constant, int64_t mark_cap, uint64_t seed) {
            const DetectionReport rep = find_outliers_monochromatic(
                data, params_from_kwargs(rho, tau, t, p, s, iterations, threshold_constant,
                                         mark_cap),
                seed);
            py::dict out;
            out["pairs"] = pairs_to_list(rep.pairs);
            out["any_marked"] = rep.any_marked;
            return out;
        },
        py::arg("data"), py::arg("rho"), py::arg("tau"), py::arg("t"), py::arg("p"),
        py::arg("s"), py::arg("iterations"), py::arg("threshold_constant") = 0.125,
        py::arg("mark_cap") = 0, py::arg("seed") = 0);

    m.def(
        "find_outliers_two_level",
        [](const BooleanMatrix& a, const BooleanMatrix& b, double rho, double tau, double kappa,
           int64_t t, int64_t p, int64_t s, int64_t iterations, double threshold_constant,
           int64_t mark_cap, uint64_t seed) {
            const DetectionReport rep = find_outliers_two_level(
                a, b,
                params_from_kwargs(rho, tau, t, p, s, iterations, threshold_constant, mark_cap),
                kappa, seed);
            py::dict out;
            out["pairs"] = pairs_to_list(rep.pairs);
            out["iteration_marks"] = rep.iteration_marks;
            out["any_marked"] = rep.any_marked;
            return out;
        },
        py::arg("a"), py::arg("b"), py::arg("rho"), py::arg("tau"), py::arg("kappa"),
        py::arg("t"), py::arg("p"), py::arg("s"), py::arg("iterations"),
        py::arg("threshold_constant") = 0.125, py::arg("mark_cap") = 0, py::arg("seed") = 0);

    m.def(
        "estimate_signal_separation",
        [](const BooleanMatrix& a, const BooleanMatrix& b,
           const std::vector<std::pair<int64_t, int64_t>>& planted, double rho, double tau,
           int64_t t, int64_t p, int64_t s, int64_t trials, double threshold_constant,
           uint64_t seed) {
            PlantedInstance inst;
            inst.a = a;
            inst.b = b;
            inst.rho = rho;
            inst.tau = tau;
            for (const auto& [j1, j2] : planted) {
                inst.planted.push_back({j1, j2, 0});
            }
            const SeparationReport rep = estimate_signal_separation(
                inst, params_from_kwargs(rho, tau, t, p, s, 1, threshold_constant, 0), trials,
                seed);
            py::dict out;
            out["threshold"] = rep.threshold;
            out["planted_min_scores"] = rep.planted_min_scores;
            out["background_max_scores"] = rep.background_max_scores;
            out["frac_planted_above"] = rep.frac_planted_above;
            out["frac_background_below"] = rep.frac_background_below;
            out["mean_planted"] = rep.mean_planted;
            out["mean_background_max"] = rep.mean_background_max;
            return out;
        },
        py::arg("a"), py::arg("b"), py::arg("planted"), py::arg("rho"), py::arg("tau"),
        py::arg("t"), py::arg("p"), py::arg("s"), py::arg("trials"),
        py::arg("threshold_constant") = 0.125, py::arg("seed") = 0);

    m.def(
        "gen_parity",
        [](int64_t n, int64_t k, double eta, int64_t d, uint64_t seed) {
            const ParityInstance inst = gen_parity(n, k, eta, d, seed);
            py::list examples;
            for (const ParityExample& ex : inst.examples) examples.append(example_to_py(ex));
            py::dict out;
            out["support"] = inst.support;
            out["examples"] = examples;
            return out;
        },
        py::arg("n"), py::arg("k"), py::arg("eta"), py::arg("d"), py::arg("seed") = 0);

    m.def(
        "solve_parity",
        [](const std::vector<std::pair<std::string, int>>& examples, int64_t n, int64_t k,
           double eta, int64_t retry_cap, const py::object& more, double epsilon,
           uint64_t seed) {
            std::vector<ParityExample> native;
            native.reserve(examples.size());
            for (const auto& ex : examples) native.push_back(example_from_py(ex));
            ExampleSource source = nullptr;
            if (!more.is_none()) {
                source = [more](int64_t count) {
                    const auto batch =
                        more(count).cast<std::vector<std::pair<std::string, int>>>();
                    std::vector<ParityExample> fresh;
                    fresh.reserve(batch.size());
                    for (const auto& ex : batch) fresh.push_back(example_from_py(ex));
                    return fresh;
                };
            }
            SolverOptions opts;
            opts.retry_cap = retry_cap;
            opts.epsilon = epsilon;
            return solve_parity(std::move(native), n, k, eta, opts, source, seed);
        },
        py::arg("examples"), py::arg("n"), py::arg("k"), py::arg("eta"),
        py::arg("retry_cap") = 8, py::arg("more") = py::none(), py::arg("epsilon") = 0.5,
        py::arg("seed") = 0);

    m.def(
        "ov_transform",
        [](const std::vector<std::string>& s_cols, const std::vector<std::string>& t_cols) {
            const OVTransform tf = ov_transform(ov_from_columns(s_cols, t_cols));
            py::dict out;
            out["a"] = tf.a;
            out["b"] = tf.b;
            out["rho"] = tf.rho;
            out["tau"] = tf.tau;
            return out;
        },
        py::arg("s_columns"), py::arg("t_columns"));

    m.def(
        "solve_ov",
        [](const std::vector<std::string>& s_cols, const std::vector<std::string>& t_cols,
           int64_t presample, uint64_t seed) {
            SolverOptions opts;
            opts.presample_pairs = presample;
            const OVResult got = solve_ov(ov_from_columns(s_cols, t_cols), opts, seed);
            py::dict out;
            out["found"] = got.found;
            if (got.found) {
                out["j1"] = got.j1;
                out["j2"] = got.j2;
            }
            return out;
        },
        py::arg("s_columns"), py::arg("t_columns"), py::arg("presample") = 0,
        py::arg("seed") = 0);

    m.def("mm_exponent",
          [](double mu, double nu, double omega, double alpha) {
              return mm_exponent(mu, nu, ExponentModel{omega, alpha});
          },
          py::arg("mu"), py::arg("nu"), py::arg("omega") = 2.3728639,
          py::arg("alpha") = 0.30298);

    m.def("detection_exponent",
          [](double gamma, double delta, double omega, double alpha) {
              return detection_exponent(gamma, delta, ExponentModel{omega, alpha});
          },
          py::arg("gamma"), py::arg("delta"), py::arg("omega") = 2.3728639,
          py::arg("alpha") = 0.30298);

    m.def("corollary_exponents",
          [](double log_tau_rho, double omega, double alpha) {
              const CorollaryExponents e =
                  corollary_exponents(log_tau_rho, ExponentModel{omega, alpha});
              py::dict out;
              out["cor1"] = e.cor1;
              out["cor2"] = e.cor2;
              out["valiant"] = e.valiant;
              out["listing1"] = e.listing1;
              out["listing2"] = e.listing2;
              return out;
          },
          py::arg("log_tau_rho"), py::arg("omega") = 2.3728639, py::arg("alpha") = 0.30298);

    m.def("two_level_exponents",
          [](double log_tau_rho, double omega, double alpha) {
              const TwoLevelExponents e =
                  two_level_exponents(log_tau_rho, ExponentModel{omega, alpha});
              py::dict out;
              out["cor5_list"] = e.cor5_list;
              out["cor5_list2"] = e.cor5_list2;
              out["cor6_list"] = e.cor6_list;
              out["cor6_list2"] = e.cor6_list2;
              return out;
          },
          py::arg("log_tau_rho"), py::arg("omega") = 2.3728639, py::arg("alpha") = 0.30298);

    py::register_exception<MarkCapExceeded>(m, "MarkCapError");
    py::register_exception<NoPairFound>(m, "NoPairFoundError");

#ifdef VERSION_INFO
    m.attr("__version__") = VERSION_INFO;
#else
    m.attr("__version__") = "dev";
#endif
}
