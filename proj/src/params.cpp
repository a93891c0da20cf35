#include "corrseek/params.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace corrseek {

namespace {

// snap values that are within a relative hair of an integer before ceiling,
// so exact powers like 1024^0.5 do not round up to 33
int64_t ceil_snapped(double x) {
    const double r = std::round(x);
    if (std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x))) {
        return static_cast<int64_t>(r);
    }
    return static_cast<int64_t>(std::ceil(x));
}

}  // namespace

bool is_perfect_square(int64_t v) {
    if (v < 0) return false;
    const auto r = static_cast<int64_t>(std::llround(std::sqrt(static_cast<double>(v))));
    for (int64_t c = std::max<int64_t>(r - 1, 0); c <= r + 1; ++c) {
        if (c * c == v) return true;
    }
    return false;
}

int64_t isqrt_exact(int64_t v) {
    const auto r = static_cast<int64_t>(std::llround(std::sqrt(static_cast<double>(v))));
    for (int64_t c = std::max<int64_t>(r - 1, 0); c <= r + 1; ++c) {
        if (c * c == v) return c;
    }
    throw std::invalid_argument("isqrt_exact: " + std::to_string(v) + " is not a perfect square");
}

int64_t derive_block_size(int64_t n, double gamma) {
    if (n < 2) throw std::invalid_argument("derive_block_size: n must be >= 2");
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw std::invalid_argument("derive_block_size: gamma must lie in (0,1)");
    }
    return ceil_snapped(std::pow(static_cast<double>(n), gamma));
}

int64_t derive_power(int64_t t, int64_t n, double rho, double tau) {
    if (!(tau < rho)) throw std::invalid_argument("derive_power: requires tau < rho");
    if (t < 1) throw std::invalid_argument("derive_power: t must be >= 1");
    if (n < 3) throw std::invalid_argument("derive_power: n too small, need ln ln n > 0");
    const double lo = (std::log(static_cast<double>(t)) +
                       5.0 * std::log(std::log(static_cast<double>(n))) + std::log(128.0)) /
                      std::log(rho / tau);
    // unique even integer in [lo, lo + 2)
    return 2 * ceil_snapped(lo / 2.0);
}

int64_t derive_sample_size(double tau, int64_t p) {
    if (!(tau > 0.0 && tau < 1.0)) {
        throw std::invalid_argument("derive_sample_size: tau must lie in (0,1)");
    }
    if (p < 2 || p % 2 != 0) {
        throw std::invalid_argument("derive_sample_size: p must be a positive even integer");
    }
    const double base = std::pow(tau, -2.0 * static_cast<double>(p));
    if (!(2.0 * base < std::ldexp(1.0, 62))) {
        throw std::overflow_error(
            "derive_sample_size: tau^{-2p} overflows the 2^62 budget; use explicit mode");
    }
    // least square >= base; ties (fp-exact window edges) count as inside
    const double tol = 1e-12 * base;
    auto root = static_cast<int64_t>(std::floor(std::sqrt(base)));
    while (static_cast<double>(root) * static_cast<double>(root) < base - tol) ++root;
    const double sq = static_cast<double>(root) * static_cast<double>(root);
    if (sq > 2.0 * base + tol) {
        throw std::domain_error(
            "derive_sample_size: no integer square in [tau^-2p, 2 tau^-2p]; use explicit mode");
    }
    return root * root;
}

namespace {

void validate_common(const Parameters& p) {
    // rho = 1 is allowed: exact duplicates arise from noiseless parity and
    // from light bulb instances planted at full correlation
    if (!(p.tau > 0.0 && p.rho <= 1.0 && p.tau < p.rho)) {
        throw std::invalid_argument("Parameters: need 0 < tau < rho <= 1");
    }
    if (p.t < 1) throw std::invalid_argument("Parameters: t must be >= 1");
    if (p.p < 2 || p.p % 2 != 0) throw std::invalid_argument("Parameters: p must be even and >= 2");
    if (!is_perfect_square(p.s) || p.s < 1) {
        throw std::invalid_argument("Parameters: s must be a positive perfect square");
    }
    if (p.iterations < 1) throw std::invalid_argument("Parameters: iterations must be >= 1");
    if (p.kappa && !(*p.kappa > 0.0 && *p.kappa < 1.0)) {
        throw std::invalid_argument("Parameters: kappa must lie in (0,1)");
    }
    if (!(p.threshold_constant > 0.0)) {
        throw std::invalid_argument("Parameters: threshold_constant must be positive");
    }
}

}  // namespace

Parameters make_parameters(int64_t n, int64_t d, double rho, double tau, double gamma,
                           double delta, const ParameterOverrides& overrides) {
    (void)d;
    Parameters out;
    out.rho = rho;
    out.tau = tau;
    out.gamma = gamma;
    out.delta_cap = delta;
    out.kappa = overrides.kappa;
    if (overrides.threshold_constant) out.threshold_constant = *overrides.threshold_constant;
    if (overrides.mark_cap) out.mark_cap = *overrides.mark_cap;

    if (overrides.explicit_core()) {
        out.mode = ParamMode::Explicit;
        out.t = *overrides.t;
        out.p = *overrides.p;
        out.s = *overrides.s;
        out.iterations = *overrides.iterations;
        validate_common(out);
        return out;
    }

    out.mode = ParamMode::Asymptotic;
    if (!(delta >= 1.0)) throw std::invalid_argument("make_parameters: Delta must be >= 1");
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw std::invalid_argument("make_parameters: gamma must lie in (0,1)");
    }
    const double log_tau_rho = std::log(rho) / std::log(tau);
    if (log_tau_rho > 1.0 - 1.0 / delta) {
        throw std::invalid_argument("make_parameters: separation violated, log_tau(rho)=" +
                                    std::to_string(log_tau_rho) + " > 1 - 1/Delta=" +
                                    std::to_string(1.0 - 1.0 / delta));
    }
    out.t = overrides.t ? *overrides.t : derive_block_size(n, gamma);
    out.p = overrides.p ? *overrides.p : derive_power(out.t, n, rho, tau);
    out.s = overrides.s ? *overrides.s : derive_sample_size(tau, out.p);
    const double ln_n = std::log(static_cast<double>(n));
    out.iterations = overrides.iterations
                         ? *overrides.iterations
                         : std::max<int64_t>(1, static_cast<int64_t>(std::ceil(ln_n * ln_n)));
    validate_common(out);
    return out;
}

Parameters explicit_parameters(double rho, double tau, int64_t t, int64_t p, int64_t s,
                               int64_t iterations) {
    Parameters out;
    out.rho = rho;
    out.tau = tau;
    out.t = t;
    out.p = p;
    out.s = s;
    out.iterations = iterations;
    out.mode = ParamMode::Explicit;
    validate_common(out);
    return out;
}

std::string Parameters::to_config() const {
    std::ostringstream os;
    os.precision(17);
    os << "mode=" << (mode == ParamMode::Asymptotic ? "asymptotic" : "explicit") << "\n"
       << "rho=" << rho << "\n"
       << "tau=" << tau << "\n"
       << "gamma=" << gamma << "\n"
       << "delta=" << delta_cap << "\n";
    if (kappa) os << "kappa=" << *kappa << "\n";
    os << "t=" << t << "\n"
       << "p=" << p << "\n"
       << "s=" << s << "\n"
       << "iterations=" << iterations << "\n"
       << "threshold_constant=" << threshold_constant << "\n"
       << "mark_cap=" << mark_cap << "\n";
    return os.str();
}

Parameters Parameters::from_config(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("Parameters::from_config: bad line: " + line);
        }
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    Parameters out;
    auto want = [&](const std::string& key) {
        auto it = kv.find(key);
        if (it == kv.end()) {
            throw std::invalid_argument("Parameters::from_config: missing key " + key);
        }
        return it->second;
    };
    out.mode = want("mode") == "asymptotic" ? ParamMode::Asymptotic : ParamMode::Explicit;
    out.rho = std::stod(want("rho"));
    out.tau = std::stod(want("tau"));
    out.gamma = std::stod(want("gamma"));
    out.delta_cap = std::stod(want("delta"));
    if (kv.count("kappa")) out.kappa = std::stod(kv["kappa"]);
    out.t = std::stoll(want("t"));
    out.p = std::stoll(want("p"));
    out.s = std::stoll(want("s"));
    out.iterations = std::stoll(want("iterations"));
    out.threshold_constant = std::stod(want("threshold_constant"));
    out.mark_cap = std::stoll(want("mark_cap"));
    validate_common(out);
    return out;
}

}  // namespace corrseek
