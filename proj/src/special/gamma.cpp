#include "scatrec/special/gamma.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace scatrec::special {
namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7,
};

void require_positive(double x, const char* what) {
    if (!(x > 0.0)) throw std::domain_error(std::string(what) + ": argument must be > 0");
}

}  // namespace

double log_gamma(double x) {
    require_positive(x, "log_gamma");
    if (std::isinf(x)) return x;
    if (x < 0.5) {
        // Gamma(x) Gamma(1-x) = pi / sin(pi x)
        return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - log_gamma(1.0 - x);
    }
    const double z = x - 1.0;
    double sum = kLanczos[0];
    for (std::size_t k = 1; k < kLanczos.size(); ++k) sum += kLanczos[k] / (z + static_cast<double>(k));
    const double t = z + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(sum);
}

double digamma(double x) {
    require_positive(x, "digamma");
    double acc = 0.0;
    while (x < 10.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    const double r = 1.0 / (x * x);
    // Bernoulli terms B_{2k} / (2k x^{2k}), k = 1..7
    const double series =
        r * (1.0 / 12 -
             r * (1.0 / 120 -
                  r * (1.0 / 252 - r * (1.0 / 240 - r * (1.0 / 132 - r * (691.0 / 32760 - r / 12.0))))));
    return acc + std::log(x) - 0.5 / x - series;
}

double beta(double a, double b) {
    require_positive(a, "beta");
    require_positive(b, "beta");
    return std::exp(log_gamma(a) + log_gamma(b) - log_gamma(a + b));
}

}  // namespace scatrec::special
