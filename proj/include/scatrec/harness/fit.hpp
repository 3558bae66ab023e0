#pragma once

#include <utility>
#include <vector>

namespace scatrec::harness {

enum class Transform { linear, log_log };

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // max |y_i - (intercept + slope x_i)| on transformed data
};

// Least-squares line through (x, y), optionally in log-log coordinates.
// Needs >= 3 points with distinct x; log_log needs x, y > 0. Throws
// std::invalid_argument otherwise.
SlopeFit fit_slope(const std::vector<std::pair<double, double>>& points,
                   Transform transform = Transform::log_log);

}  // namespace scatrec::harness
