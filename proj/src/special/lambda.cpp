#include "scatrec/special/lambda.hpp"

#include "scatrec/special/gamma.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace scatrec::special {
namespace {

constexpr double pi = std::numbers::pi;
// Endpoints produced by a floating sweep may land an ulp outside.
constexpr double kRangeSlack = 1e-12;

void require_power_range(double p, const char* what) {
    if (!(p >= kPowerMin - kRangeSlack && p <= kPowerMax + kRangeSlack))
        throw std::domain_error(std::string(what) + ": p must lie in [4/3, 4], got " +
                                std::to_string(p));
}

double gamma_ratio(double p) {
    const double z = 0.75 * p;
    return std::exp(log_gamma(z - 0.5) - log_gamma(z));
}

}  // namespace

ExponentSet scattering_exponents(double p) {
    require_power_range(p, "scattering_exponents");
    ExponentSet e;
    e.p = p;
    e.q = p + 2.0;
    e.r = 6.0 * (p + 2.0) / (3.0 * (p + 2.0) - 4.0);
    e.s_c = 1.5 - 2.0 / p;
    e.r_c = 3.0 * p * (p + 2.0) / 4.0;
    return e;
}

LambdaValue lambda_const(int d, double p) {
    if (d < 1) throw std::domain_error("lambda_const: d must be >= 1");
    if (!(p > 2.0 / d) || !std::isfinite(p))
        throw std::domain_error("lambda_const: need p > 2/d (Gamma pole), got p = " +
                                std::to_string(p));
    const double z = 0.25 * d * p;
    const double log_value = 0.5 * (d + 1) * std::log(pi) + 0.5 * d * std::log(4.0 / (p + 2.0)) +
                             log_gamma(z - 0.5) - log_gamma(z);
    LambdaValue v;
    v.d = d;
    v.p = p;
    v.value = std::exp(log_value);
    const double dlog = -0.5 * d / (p + 2.0) + 0.25 * d * (digamma(z - 0.5) - digamma(z));
    v.derivative = v.value * dlog;
    return v;
}

double lambda_prime(double p) {
    require_power_range(p, "lambda_prime");
    const double z = 0.75 * p;
    const double bracket = 1.5 / (p + 2.0) + 0.75 * (digamma(z) - digamma(z - 0.5));
    return -kLambdaPrimeC * std::pow(p + 2.0, -1.5) * gamma_ratio(p) * bracket;
}

double lambda_prime_floor(double p) {
    require_power_range(p, "lambda_prime_floor");
    return 1.5 * kLambdaPrimeC * std::pow(p + 2.0, -2.5) / std::sqrt(0.75 * p);
}

LambdaInverse invert_lambda(double target) {
    if (!std::isfinite(target)) throw std::invalid_argument("invert_lambda: target must be finite");
    const double hi_val = lambda_const(3, kPowerMin).value;  // lambda decreases in p
    const double lo_val = lambda_const(3, kPowerMax).value;
    if (target >= hi_val) return {kPowerMin, target > hi_val};
    if (target <= lo_val) return {kPowerMax, target < lo_val};
    double lo = kPowerMin, hi = kPowerMax;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (lambda_const(3, mid).value > target)
            lo = mid;
        else
            hi = mid;
    }
    return {0.5 * (lo + hi), false};
}

}  // namespace scatrec::special
