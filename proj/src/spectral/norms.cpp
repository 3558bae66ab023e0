#include "scatrec/spectral/norms.hpp"

#include "scatrec/simd/kernels.hpp"
#include "scatrec/spectral/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace scatrec::spectral {

double lebesgue_norm(const ComplexField& field, double r) {
    require_space(field, Space::physical, "lebesgue_norm");
    if (!(r >= 1.0)) throw std::invalid_argument("lebesgue_norm: r must be >= 1");
    if (std::isinf(r)) return simd::max_abs(field.values());
    const double w = field.grid().cell_volume();
    if (r == 2.0) return std::sqrt(w * simd::sum_abs2(field.values()));
    return std::pow(w * simd::sum_abs_pow(field.values(), r), 1.0 / r);
}

double sobolev_norm(const ComplexField& field, double s, bool homogeneous) {
    require_space(field, Space::physical, "sobolev_norm");
    if (!std::isfinite(s)) throw std::invalid_argument("sobolev_norm: s must be finite");
    if (s == 0.0) return lebesgue_norm(field, 2.0);

    const ComplexField spec = to_spectral(field);
    const auto xi2 = field.grid().xi_squared();
    if (homogeneous && s < 0.0) {
        const double total = simd::sum_abs2(spec.values());
        if (std::norm(spec[0]) > 1e-24 * total)
            throw std::domain_error(
                "sobolev_norm: homogeneous norm with s < 0 needs a mean-free field; "
                "use the closed-form Gaussian Sobolev norms for probes");
    }
    std::vector<double> weights(xi2.size());
    for (std::size_t i = 0; i < xi2.size(); ++i) {
        if (homogeneous)
            weights[i] = xi2[i] == 0.0 ? 0.0 : std::pow(xi2[i], s);
        else
            weights[i] = std::pow(1.0 + xi2[i], s);
    }
    const auto& g = field.grid();
    const double sum = simd::sum_weighted_abs2(spec.values(), weights);
    return std::sqrt(g.cell_volume() / static_cast<double>(g.size()) * sum);
}

ComplexField fractional_derivative(const ComplexField& field, double s) {
    if (!(s >= 0.0)) throw std::invalid_argument("fractional_derivative: s must be >= 0");
    if (s == 0.0) return field;
    ComplexField spec = to_spectral(field);
    const auto xi2 = field.grid().xi_squared();
    for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= std::pow(xi2[i], 0.5 * s);
    return from_spectral(std::move(spec));
}

ComplexField gradient_modulus(const ComplexField& field) {
    require_space(field, Space::physical, "gradient_modulus");
    const auto& g = field.grid();
    const ComplexField spec = to_spectral(field);
    std::vector<double> acc(field.size(), 0.0);
    const int n = g.points_per_axis();
    for (int a = 0; a < g.dim(); ++a) {
        ComplexField d = spec;
        for (std::size_t i = 0; i < d.size(); ++i) {
            const int j = g.unflatten(i)[a];
            // Drop the unpaired Nyquist mode so real inputs keep real derivatives.
            const double xi = (j == n / 2) ? 0.0 : g.frequency_at(j);
            d[i] *= std::complex<double>(0.0, xi);
        }
        from_spectral_inplace(d);
        for (std::size_t i = 0; i < d.size(); ++i) acc[i] += std::norm(d[i]);
    }
    ComplexField out(g, Space::physical);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::sqrt(acc[i]);
    return out;
}

double spacetime_norm_from_profile(const std::vector<double>& times,
                                   const std::vector<double>& spatial_norms, double q) {
    if (times.size() != spatial_norms.size())
        throw std::invalid_argument("spacetime_norm: times and norms differ in length");
    if (times.size() < 2) throw std::invalid_argument("spacetime_norm: need at least 2 snapshots");
    if (!(q >= 1.0)) throw std::invalid_argument("spacetime_norm: q must be >= 1");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw std::invalid_argument("spacetime_norm: snapshot times must increase strictly");
    if (std::isinf(q)) return *std::max_element(spatial_norms.begin(), spatial_norms.end());
    double integral = 0.0;
    for (std::size_t i = 1; i < times.size(); ++i) {
        const double f0 = std::pow(spatial_norms[i - 1], q);
        const double f1 = std::pow(spatial_norms[i], q);
        integral += 0.5 * (times[i] - times[i - 1]) * (f0 + f1);
    }
    return std::pow(integral, 1.0 / q);
}

double spacetime_norm(const std::vector<std::pair<double, ComplexField>>& snapshots, double q,
                      double r) {
    if (snapshots.size() < 2) throw std::invalid_argument("spacetime_norm: need at least 2 snapshots");
    std::vector<double> times, norms;
    times.reserve(snapshots.size());
    norms.reserve(snapshots.size());
    for (const auto& [t, u] : snapshots) {
        times.push_back(t);
        norms.push_back(lebesgue_norm(u, r));
    }
    return spacetime_norm_from_profile(times, norms, q);
}

}  // namespace scatrec::spectral
