#pragma once

#include <iosfwd>
#include <vector>

namespace corrseek {

/// Matrix multiplication exponent model: omega for the square case, alpha
/// for the widest aspect ratio still multipliable in quadratic time.
struct ExponentModel {
    double omega = 2.3728639;
    double alpha = 0.30298;

    bool consistent() const { return omega <= 3.0 - alpha; }
};

/// Upper bound on M(mu, nu), the exponent for multiplying n^mu x n^nu by
/// n^nu x n^mu. Inside the alpha plateau this is 2*max(mu,nu); between the
/// plateau edge and the square case the value is interpolated linearly
/// (an upper bound by convexity), never exceeding the coarse bound
/// 2*mu + (omega-2)*nu.
double mm_exponent(double mu, double nu, const ExponentModel& model);

/// Coarse bound from the classical inequality alone, for comparison.
double mm_exponent_coarse(double mu, double nu, const ExponentModel& model);

/// max{ 1 - gamma + M(Delta*gamma, gamma), M(1-gamma, 2*Delta*gamma) }.
double detection_exponent(double gamma, double delta, const ExponentModel& model);

struct CorollaryExponents {
    double cor1 = 0.0;      // 2*omega / (3 - x)
    double cor2 = 0.0;      // 4 / (2 + alpha*(1-x))
    double valiant = 0.0;   // (5-omega)/(4-omega) + omega*x
    double listing1 = 0.0;  // 2*(1-x) / (3-x)
    double listing2 = 0.0;  // 2*alpha*(1-x) / (2 + alpha*(1-x))
};

/// Closed forms at x = log_tau(rho), 0 <= x < 1.
CorollaryExponents corollary_exponents(double log_tau_rho, const ExponentModel& model);

struct TwoLevelExponents {
    double cor5_list = 0.0;   // 2*omega*(1-x) / (3-x)^2
    double cor5_list2 = 0.0;  // 2*(1-x)^2 / (3-x)^2
    double cor6_list = 0.0;   // 4*alpha*(1-x) / (2 + alpha*(1-x))^2
    double cor6_list2 = 0.0;  // 2*alpha^2*(1-x)^2 / (2 + alpha*(1-x))^2
};

TwoLevelExponents two_level_exponents(double log_tau_rho, const ExponentModel& model);

/// One CSV row per grid point:
/// log_tau_rho,cor1_detect,cor2_detect,valiant_detect,cor1_list,cor2_list,cor5_list,cor6_list2
/// with six decimal places.
void emit_curves(const ExponentModel& model, const std::vector<double>& grid, std::ostream& out);

}  // namespace corrseek
