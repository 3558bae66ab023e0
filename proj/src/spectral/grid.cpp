#include "scatrec/spectral/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace scatrec::spectral {

double SpectralGrid::cell_volume() const { return std::pow(spacing(), dim_); }

double SpectralGrid::volume() const { return std::pow(2.0 * half_width_, dim_); }

double SpectralGrid::frequency_at(int j) const {
    const int k = j < n_ / 2 ? j : j - n_;
    return std::numbers::pi * k / half_width_;
}

std::vector<double> SpectralGrid::frequencies() const {
    std::vector<double> out;
    out.reserve(n_);
    for (int k = -n_ / 2; k < n_ / 2; ++k) out.push_back(std::numbers::pi * k / half_width_);
    return out;
}

std::array<int, 3> SpectralGrid::unflatten(std::size_t flat) const {
    std::array<int, 3> idx{0, 0, 0};
    for (int a = 0; a < dim_; ++a) {
        idx[a] = static_cast<int>(flat % n_);
        flat /= n_;
    }
    return idx;
}

Point SpectralGrid::point(std::size_t flat) const {
    const auto idx = unflatten(flat);
    Point x{0.0, 0.0, 0.0};
    for (int a = 0; a < dim_; ++a) x[a] = coordinate(idx[a]);
    return x;
}

SpectralGrid make_grid(int dim, int points_per_axis, double half_width) {
    if (dim < 1 || dim > 3)
        throw std::invalid_argument("make_grid: dim must be 1, 2 or 3, got " + std::to_string(dim));
    if (points_per_axis < 8 || points_per_axis % 2 != 0)
        throw std::invalid_argument("make_grid: points_per_axis must be even and >= 8, got " +
                                    std::to_string(points_per_axis));
    if (!(half_width > 0.0) || !std::isfinite(half_width))
        throw std::invalid_argument("make_grid: half_width must be positive");

    SpectralGrid g;
    g.dim_ = dim;
    g.n_ = points_per_axis;
    g.half_width_ = half_width;
    g.size_ = 1;
    for (int a = 0; a < dim; ++a) g.size_ *= static_cast<std::size_t>(points_per_axis);

    std::vector<double> axis(points_per_axis);
    for (int j = 0; j < points_per_axis; ++j) {
        const double xi = g.frequency_at(j);
        axis[j] = xi * xi;
    }
    auto xi2 = std::make_shared<std::vector<double>>(g.size_);
    const std::size_t n = points_per_axis;
    for (std::size_t flat = 0; flat < g.size_; ++flat) {
        std::size_t rest = flat;
        double s = 0.0;
        for (int a = 0; a < dim; ++a) {
            s += axis[rest % n];
            rest /= n;
        }
        (*xi2)[flat] = s;
    }
    g.xi2_ = std::move(xi2);
    return g;
}

}  // namespace scatrec::spectral
