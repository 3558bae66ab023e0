#include "scatrec/harness/fit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace scatrec::harness {

SlopeFit fit_slope(const std::vector<std::pair<double, double>>& points, Transform transform) {
    if (points.size() < 3) throw std::invalid_argument("fit_slope: need at least 3 points");
    std::vector<double> xs, ys;
    for (const auto& [x, y] : points) {
        if (!std::isfinite(x) || !std::isfinite(y)) throw std::invalid_argument("fit_slope: non-finite point");
        if (transform == Transform::log_log) {
            if (!(x > 0.0) || !(y > 0.0)) throw std::invalid_argument("fit_slope: log-log needs positive values");
            xs.push_back(std::log(x));
            ys.push_back(std::log(y));
        } else {
            xs.push_back(x);
            ys.push_back(y);
        }
    }
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (!(sxx > 0.0)) throw std::invalid_argument("fit_slope: x values must not all coincide");

    SlopeFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    for (std::size_t i = 0; i < xs.size(); ++i)
        f.residual = std::max(f.residual, std::abs(ys[i] - (f.intercept + f.slope * xs[i])));
    return f;
}

}  // namespace scatrec::harness
