#include "scatrec/nls/coefficient.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace scatrec::nls {
namespace {

double distance(const Point& x, const Point& c) {
    const double d0 = x[0] - c[0], d1 = x[1] - c[1], d2 = x[2] - c[2];
    return std::sqrt(d0 * d0 + d1 * d1 + d2 * d2);
}

}  // namespace

AnalyticCoefficient& AnalyticCoefficient::add(CoefficientTerm term) {
    if (!(term.width > 0.0)) throw std::invalid_argument("coefficient term width must be > 0");
    if (!std::isfinite(term.amplitude)) throw std::invalid_argument("coefficient amplitude must be finite");
    if (term.amplitude != 0.0) terms_.push_back(term);
    return *this;
}

AnalyticCoefficient AnalyticCoefficient::plus(const AnalyticCoefficient& g, double h) const {
    AnalyticCoefficient out = *this;
    out.constant_ += h * g.constant_;
    for (auto t : g.terms_) {
        t.amplitude *= h;
        out.add(t);
    }
    return out;
}

AnalyticCoefficient AnalyticCoefficient::translated(const Point& shift) const {
    AnalyticCoefficient out = *this;
    for (auto& t : out.terms_)
        for (int a = 0; a < 3; ++a) t.center[a] += shift[a];
    return out;
}

double AnalyticCoefficient::operator()(const Point& x) const {
    double v = constant_;
    for (const auto& t : terms_) {
        const double r = distance(x, t.center);
        if (t.kind == CoefficientTerm::Kind::gaussian)
            v += t.amplitude * std::exp(-(r * r) / (t.width * t.width));
        else
            v += t.amplitude * std::max(0.0, 1.0 - r / t.width);
    }
    return v;
}

double AnalyticCoefficient::sup_bound() const {
    double s = std::abs(constant_);
    for (const auto& t : terms_) s += std::abs(t.amplitude);
    return s;
}

double AnalyticCoefficient::lip_bound() const {
    // max |d/dr e^{-r^2/w^2}| = sqrt(2/e) / w
    double l = 0.0;
    for (const auto& t : terms_) {
        if (t.kind == CoefficientTerm::Kind::gaussian)
            l += std::abs(t.amplitude) * std::sqrt(2.0 / std::exp(1.0)) / t.width;
        else
            l += std::abs(t.amplitude) / t.width;
    }
    return l;
}

double finite_difference_lipschitz(const spectral::SpectralGrid& grid,
                                   const std::vector<double>& values) {
    const int d = grid.dim(), n = grid.points_per_axis();
    const double h = grid.spacing();
    std::size_t stride[3] = {1, static_cast<std::size_t>(n), static_cast<std::size_t>(n) * n};
    double worst = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto idx = grid.unflatten(i);
        double g2 = 0.0;
        for (int a = 0; a < d; ++a) {
            const std::size_t j = idx[a] + 1 < n ? i + stride[a] : i - (n - 1) * stride[a];
            const double diff = (values[j] - values[i]) / h;
            g2 += diff * diff;
        }
        worst = std::max(worst, std::sqrt(g2));
    }
    return worst;
}

CoefficientProfile CoefficientProfile::from_analytic(const spectral::SpectralGrid& grid,
                                                     const AnalyticCoefficient& a) {
    CoefficientProfile c;
    c.grid_ = grid;
    c.values_.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) c.values_[i] = a(grid.point(i));
    double mx = 0.0;
    for (double v : c.values_) mx = std::max(mx, std::abs(v));
    c.sup_norm_ = std::max(a.sup_bound(), mx);
    c.lip_norm_ = std::max(a.lip_bound(), finite_difference_lipschitz(grid, c.values_));
    c.is_zero_ = a.is_constant() && a.constant() == 0.0;
    c.analytic_ = a;
    return c;
}

CoefficientProfile CoefficientProfile::from_samples(const spectral::SpectralGrid& grid,
                                                    std::vector<double> values, double slack) {
    if (values.size() != grid.size())
        throw std::invalid_argument("coefficient samples do not match the grid");
    if (!(slack >= 1.0)) throw std::invalid_argument("coefficient slack must be >= 1");
    CoefficientProfile c;
    c.grid_ = grid;
    double mx = 0.0;
    for (double v : values) {
        if (!std::isfinite(v)) throw std::invalid_argument("coefficient samples must be finite");
        mx = std::max(mx, std::abs(v));
    }
    c.sup_norm_ = mx;
    c.lip_norm_ = slack * finite_difference_lipschitz(grid, values);
    c.is_zero_ = mx == 0.0;
    c.values_ = std::move(values);
    return c;
}

double CoefficientProfile::value_at(const Point& x) const {
    if (analytic_) return (*analytic_)(x);
    const int d = grid_.dim(), n = grid_.points_per_axis();
    const double h = grid_.spacing(), L = grid_.half_width();
    int i0[3] = {0, 0, 0};
    double fr[3] = {0.0, 0.0, 0.0};
    for (int a = 0; a < d; ++a) {
        double s = (x[a] + L) / h;
        s -= n * std::floor(s / n);  // periodic wrap into [0, n)
        const int i = std::min(static_cast<int>(std::floor(s)), n - 1);
        i0[a] = i;
        fr[a] = s - i;
    }
    double v = 0.0;
    const int corners = 1 << d;
    for (int c = 0; c < corners; ++c) {
        double w = 1.0;
        std::size_t flat = 0, stride = 1;
        for (int a = 0; a < d; ++a) {
            const int bit = (c >> a) & 1;
            w *= bit ? fr[a] : 1.0 - fr[a];
            flat += static_cast<std::size_t>((i0[a] + bit) % n) * stride;
            stride *= n;
        }
        if (w != 0.0) v += w * values_[flat];
    }
    return v;
}

CoefficientProfile CoefficientProfile::resampled(const spectral::SpectralGrid& grid) const {
    if (analytic_) return from_analytic(grid, *analytic_);
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = value_at(grid.point(i));
    auto out = from_samples(grid, std::move(v), 1.0);
    out.lip_norm_ = std::max(out.lip_norm_, lip_norm_);
    out.sup_norm_ = std::max(out.sup_norm_, sup_norm_);
    return out;
}

}  // namespace scatrec::nls
