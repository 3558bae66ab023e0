#include "scatrec/gaussian/probe.hpp"

#include "scatrec/special/gamma.hpp"
#include "scatrec/special/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace scatrec::gaussian {
namespace {

constexpr double pi = std::numbers::pi;

double sphere_area(int d) {
    // |S^{d-1}| = 2 pi^{d/2} / Gamma(d/2)
    return 2.0 * std::pow(pi, 0.5 * d) / std::tgamma(0.5 * d);
}

}  // namespace

GaussianProbe make_probe(double sigma, const Point& center, int dim) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("probe: sigma must be > 0");
    if (dim < 1 || dim > 3) throw std::invalid_argument("probe: dim must be 1, 2 or 3");
    GaussianProbe p{sigma, center, dim};
    for (int a = dim; a < 3; ++a) p.center[a] = 0.0;
    return p;
}

double probe_boundary_value(const GaussianProbe& probe, double half_width) {
    double gap = half_width;
    for (int a = 0; a < probe.dim; ++a) gap = std::min(gap, half_width - std::abs(probe.center[a]));
    if (gap <= 0.0) return 1.0;
    return std::exp(-gap * gap / (4.0 * probe.sigma * probe.sigma));
}

spectral::ComplexField probe_field(const GaussianProbe& probe, const spectral::SpectralGrid& grid) {
    if (probe.dim != grid.dim()) throw std::invalid_argument("probe_field: dimension mismatch");
    const double edge = probe_boundary_value(probe, grid.half_width());
    if (edge > kProbeBoundaryTol)
        throw std::invalid_argument("probe_field: probe too wide for the box (boundary value " +
                                    std::to_string(edge) + ")");
    const double inv = 1.0 / (4.0 * probe.sigma * probe.sigma);
    return spectral::ComplexField::sample(grid, [&](const Point& x) {
        double r2 = 0.0;
        for (int a = 0; a < probe.dim; ++a) r2 += (x[a] - probe.center[a]) * (x[a] - probe.center[a]);
        return cplx(std::exp(-r2 * inv), 0.0);
    });
}

cplx probe_free_evolution(const GaussianProbe& probe, double t, const Point& x) {
    const double s2 = probe.sigma * probe.sigma;
    const cplx z(s2, t);
    double r2 = 0.0;
    for (int a = 0; a < probe.dim; ++a) r2 += (x[a] - probe.center[a]) * (x[a] - probe.center[a]);
    return std::pow(s2 / z, 0.5 * probe.dim) * std::exp(-r2 / (4.0 * z));
}

spectral::ComplexField probe_free_field(const GaussianProbe& probe, const spectral::SpectralGrid& grid,
                                        double t, bool periodize) {
    if (probe.dim != grid.dim()) throw std::invalid_argument("probe_free_field: dimension mismatch");
    if (!periodize)
        return spectral::ComplexField::sample(grid, [&](const Point& x) { return probe_free_evolution(probe, t, x); });

    // |e^{it Delta} phi| decays like exp(-r^2 sigma^2 / (4 (sigma^4 + t^2))).
    const double s2 = probe.sigma * probe.sigma;
    const double reach = std::sqrt(4.0 * (s2 * s2 + t * t) / s2 * 40.0);  // e^{-40} ~ 4e-18
    const double period = 2.0 * grid.half_width();
    const int m = static_cast<int>(std::ceil(reach / period)) + 1;
    const int d = probe.dim;
    const cplx z(s2, t);
    const cplx pref = std::pow(s2 / z, 0.5 * d);
    const cplx inv = 1.0 / (4.0 * z);
    return spectral::ComplexField::sample(grid, [&](const Point& x) {
        // Separable: the image sum factorizes over axes.
        cplx prod = pref;
        for (int a = 0; a < d; ++a) {
            cplx s = 0.0;
            for (int k = -m; k <= m; ++k) {
                const double y = x[a] - probe.center[a] + k * period;
                s += std::exp(-y * y * inv);
            }
            prod *= s;
        }
        return prod;
    });
}

double probe_l2_norm(const GaussianProbe& probe) {
    return std::pow(2.0 * pi * probe.sigma * probe.sigma, 0.25 * probe.dim);
}

double probe_sobolev_norm(const GaussianProbe& probe, double s, bool homogeneous) {
    const int d = probe.dim;
    const double s2 = probe.sigma * probe.sigma;
    // |phi^(xi)|^2 = (4 pi s2)^d exp(-2 s2 |xi|^2); ||.||^2 = (2 pi)^{-d} int w(xi) |phi^|^2 dxi
    const double pref = std::pow(4.0 * pi * s2, d) / std::pow(2.0 * pi, d) * sphere_area(d);
    if (homogeneous) {
        if (!(s > -0.5 * d)) throw std::domain_error("probe_sobolev_norm: need s > -d/2");
        // int_0^inf k^{2s+d-1} e^{-2 s2 k^2} dk = Gamma(s+d/2) / (2 (2 s2)^{s+d/2})
        const double a = s + 0.5 * d;
        return std::sqrt(pref * std::exp(special::log_gamma(a)) / (2.0 * std::pow(2.0 * s2, a)));
    }
    if (s == 1.0) return probe_h1_norm(probe);
    const auto res = special::integrate_to_infinity(
        [&](double k) { return std::pow(1.0 + k * k, s) * std::pow(k, d - 1) * std::exp(-2.0 * s2 * k * k); },
        0.0, {0.0, 1e-13, 4000});
    return std::sqrt(pref * res.value);
}

double probe_h1_norm(const GaussianProbe& probe) {
    const double l2 = probe_l2_norm(probe);
    const double h1 = probe_sobolev_norm(probe, 1.0, true);
    return std::sqrt(l2 * l2 + h1 * h1);
}

double probe_free_lebesgue_norm(const GaussianProbe& probe, double t, double r) {
    if (!(r >= 1.0)) throw std::invalid_argument("probe_free_lebesgue_norm: r must be >= 1");
    const int d = probe.dim;
    const double s4 = std::pow(probe.sigma, 4), s2 = probe.sigma * probe.sigma;
    const double amp = std::pow(s4 / (s4 + t * t), 0.25 * d);
    if (std::isinf(r)) return amp;
    // |u|^r = amp^r exp(-r |x|^2 s2 / (4 (s4 + t^2)))
    const double vol = std::pow(4.0 * pi * (s4 + t * t) / (r * s2), 0.5 * d);
    return amp * std::pow(vol, 1.0 / r);
}

}  // namespace scatrec::gaussian
