#include "corrseek/tradeoff.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace corrseek {

namespace {

void validate(const ExponentModel& model) {
    if (!(model.omega >= 2.0 && model.omega <= 3.0)) {
        throw std::invalid_argument("ExponentModel: omega must lie in [2,3]");
    }
    if (!(model.alpha > 0.0 && model.alpha <= 1.0)) {
        throw std::invalid_argument("ExponentModel: alpha must lie in (0,1]");
    }
}

}  // namespace

double mm_exponent_coarse(double mu, double nu, const ExponentModel& model) {
    if (mu < nu) std::swap(mu, nu);
    return 2.0 * mu + (model.omega - 2.0) * nu;
}

double mm_exponent(double mu, double nu, const ExponentModel& model) {
    validate(model);
    if (!(mu > 0.0 && nu > 0.0)) {
        throw std::invalid_argument("mm_exponent: arguments must be positive");
    }
    if (mu < nu) std::swap(mu, nu);
    if (nu <= model.alpha * mu) {
        return 2.0 * mu;
    }
    // between (nu = alpha*mu -> 2*mu) and (nu = mu -> omega*mu)
    const double interp =
        2.0 * mu + (model.omega - 2.0) * (nu - model.alpha * mu) / (1.0 - model.alpha);
    return std::min(interp, mm_exponent_coarse(mu, nu, model));
}

double detection_exponent(double gamma, double delta, const ExponentModel& model) {
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw std::invalid_argument("detection_exponent: gamma must lie in (0,1)");
    }
    if (!(delta >= 1.0)) {
        throw std::invalid_argument("detection_exponent: Delta must be >= 1");
    }
    const double compression = 1.0 - gamma + mm_exponent(delta * gamma, gamma, model);
    const double product = mm_exponent(1.0 - gamma, 2.0 * delta * gamma, model);
    return std::max(compression, product);
}

CorollaryExponents corollary_exponents(double x, const ExponentModel& model) {
    validate(model);
    if (!(x >= 0.0 && x < 1.0)) {
        throw std::invalid_argument("corollary_exponents: log_tau(rho) must lie in [0,1)");
    }
    CorollaryExponents out;
    out.cor1 = 2.0 * model.omega / (3.0 - x);
    out.cor2 = 4.0 / (2.0 + model.alpha * (1.0 - x));
    out.valiant = (5.0 - model.omega) / (4.0 - model.omega) + model.omega * x;
    out.listing1 = 2.0 * (1.0 - x) / (3.0 - x);
    out.listing2 = 2.0 * model.alpha * (1.0 - x) / (2.0 + model.alpha * (1.0 - x));
    return out;
}

TwoLevelExponents two_level_exponents(double x, const ExponentModel& model) {
    validate(model);
    if (!(x >= 0.0 && x < 1.0)) {
        throw std::invalid_argument("two_level_exponents: log_tau(rho) must lie in [0,1)");
    }
    TwoLevelExponents out;
    const double one = 1.0 - x;
    const double den1 = 3.0 - x;
    const double den2 = 2.0 + model.alpha * one;
    out.cor5_list = 2.0 * model.omega * one / (den1 * den1);
    out.cor5_list2 = 2.0 * one * one / (den1 * den1);
    out.cor6_list = 4.0 * model.alpha * one / (den2 * den2);
    out.cor6_list2 = 2.0 * model.alpha * model.alpha * one * one / (den2 * den2);
    return out;
}

void emit_curves(const ExponentModel& model, const std::vector<double>& grid, std::ostream& out) {
    out << "log_tau_rho,cor1_detect,cor2_detect,valiant_detect,cor1_list,cor2_list,"
           "cor5_list,cor6_list2\n";
    out << std::fixed << std::setprecision(6);
    for (double x : grid) {
        const CorollaryExponents c = corollary_exponents(x, model);
        const TwoLevelExponents t = two_level_exponents(x, model);
        out << x << ',' << c.cor1 << ',' << c.cor2 << ',' << c.valiant << ',' << c.listing1
            << ',' << c.listing2 << ',' << t.cor5_list << ',' << t.cor6_list2 << '\n';
    }
}

}  // namespace corrseek
