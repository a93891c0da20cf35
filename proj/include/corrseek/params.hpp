#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace corrseek {

enum class ParamMode { Asymptotic, Explicit };

/// Problem thresholds plus the algorithm knobs. All logarithms in the
/// derivation formulas are natural logarithms.
struct Parameters {
    double rho = 0.0;   // outlier threshold, (0,1)
    double tau = 0.0;   // background threshold, (0,1), tau < rho
    double gamma = 1.0 / 3.0;
    double delta_cap = 1.0;                // Delta >= 1
    std::optional<double> kappa;           // second-level tradeoff, (0,1)
    int64_t t = 0;                         // block size
    int64_t p = 0;                         // tensor power, even
    int64_t s = 0;                         // sample size, perfect square
    int64_t iterations = 0;
    ParamMode mode = ParamMode::Explicit;
    double threshold_constant = 0.125;     // marking threshold = c * rho^p * s
    int64_t mark_cap = 0;                  // 0 means "use the default, n"

    std::string to_config() const;
    static Parameters from_config(const std::string& text);
};

/// The unique integer t with n^gamma <= t < n^gamma + 1.
int64_t derive_block_size(int64_t n, double gamma);

/// The unique even integer p with
///   (ln t + 5 ln ln n + ln 128) / ln(rho/tau) <= p < same + 2.
int64_t derive_power(int64_t t, int64_t n, double rho, double tau);

/// The least integer square s with tau^{-2p} <= s <= 2 tau^{-2p}.
int64_t derive_sample_size(double tau, int64_t p);

/// Explicit (t, p, s, iterations) to run instead of the asymptotic
/// derivations; any subset may be set.
struct ParameterOverrides {
    std::optional<int64_t> t;
    std::optional<int64_t> p;
    std::optional<int64_t> s;
    std::optional<int64_t> iterations;
    std::optional<double> threshold_constant;
    std::optional<int64_t> mark_cap;
    std::optional<double> kappa;

    bool explicit_core() const { return t && p && s && iterations; }
};

/// Derive (t, p, s, iterations) from (n, d, rho, tau, gamma, Delta), or
/// accept the overrides wholesale after invariant checks (explicit mode).
Parameters make_parameters(int64_t n, int64_t d, double rho, double tau, double gamma,
                           double delta, const ParameterOverrides& overrides = {});

/// Convenience for desk-scale runs: everything user-chosen.
Parameters explicit_parameters(double rho, double tau, int64_t t, int64_t p, int64_t s,
                               int64_t iterations);

bool is_perfect_square(int64_t v);
int64_t isqrt_exact(int64_t v);  // throws if v is not a perfect square

}  // namespace corrseek
