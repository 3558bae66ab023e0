#include "scatrec/gaussian/kernel.hpp"

#include "scatrec/errors.hpp"
#include "scatrec/special/lambda.hpp"
#include "scatrec/special/quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace scatrec::gaussian {
namespace {

constexpr double pi = std::numbers::pi;

double sphere_area(int d) { return 2.0 * std::pow(pi, 0.5 * d) / std::tgamma(0.5 * d); }

void check_spec(int d, double p) {
    if (d < 1 || d > 3) throw std::invalid_argument("kernel: d must be 1, 2 or 3");
    if (!(p > 2.0 / d)) throw std::domain_error("kernel: need p > 2/d");
}

special::QuadResult require(special::QuadResult r, const char* what) {
    if (!r.converged)
        throw NonConvergence(std::string(what) + ": quadrature did not converge (estimate " +
                             std::to_string(r.value) + ", error " + std::to_string(r.error) + ")");
    return r;
}

// int_R^inf r^{d-1} exp(-beta r^2) dr
double radial_gaussian_tail(int d, double beta, double R, double rel_tol) {
    const double scale = 1.0 / std::sqrt(beta);
    auto f = [&](double rho) { return std::pow(rho, d - 1) * std::exp(-rho * rho); };
    const double lo = R / scale;
    special::QuadResult r;
    if (lo == 0.0)
        r = special::integrate_to_infinity(f, 0.0, {0.0, rel_tol, 4000});
    else
        r = special::integrate_to_infinity(f, lo, {1e-300, rel_tol, 4000});
    require(r, "radial integral");
    return r.value * std::pow(scale, d);
}

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < n; ++i) {
        double z = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 1; k <= n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        x[i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
}

// Integral of (a(x0 + r omega) - a(x0)) over the unit sphere S^{d-1}.
class SphericalDefect {
public:
    SphericalDefect(const nls::CoefficientProfile& coeff, const GaussianProbe& probe)
        : coeff_(coeff), probe_(probe), a0_(coeff.value_at(probe.center)) {
        radial_ = coeff.analytic() && coeff.analytic()->terms().size() <= 1;
        if (radial_ && !coeff.analytic()->terms().empty()) {
            const auto& c = coeff.analytic()->terms().front().center;
            for (int a = 0; a < probe.dim; ++a)
                if (c[a] != probe.center[a]) radial_ = false;
        }
        if (probe.dim == 3 && !radial_) {
            gauss_legendre(kPolar, mu_, wmu_);
        }
    }

    double operator()(double r) const {
        const int d = probe_.dim;
        const Point& c = probe_.center;
        if (radial_) {
            Point x = c;
            x[0] += r;
            return sphere_area(d) * (coeff_.value_at(x) - a0_);
        }
        if (d == 1) return coeff_.value_at({c[0] + r, 0, 0}) + coeff_.value_at({c[0] - r, 0, 0}) - 2.0 * a0_;
        double sum = 0.0;
        if (d == 2) {
            for (int j = 0; j < kAzimuth; ++j) {
                const double ph = 2.0 * pi * (j + 0.5) / kAzimuth;
                sum += coeff_.value_at({c[0] + r * std::cos(ph), c[1] + r * std::sin(ph), 0}) - a0_;
            }
            return sum * 2.0 * pi / kAzimuth;
        }
        for (int i = 0; i < kPolar; ++i) {
            const double ct = mu_[i], st = std::sqrt(1.0 - ct * ct);
            double ring = 0.0;
            for (int j = 0; j < kAzimuth; ++j) {
                const double ph = 2.0 * pi * (j + 0.5) / kAzimuth;
                ring += coeff_.value_at({c[0] + r * st * std::cos(ph), c[1] + r * st * std::sin(ph),
                                         c[2] + r * ct}) - a0_;
            }
            sum += wmu_[i] * ring;
        }
        return sum * 2.0 * pi / kAzimuth;
    }

    double center_value() const { return a0_; }

private:
    static constexpr int kPolar = 48;
    static constexpr int kAzimuth = 96;
    const nls::CoefficientProfile& coeff_;
    GaussianProbe probe_;
    double a0_;
    bool radial_ = false;
    std::vector<double> mu_, wmu_;
};

}  // namespace

double kernel_value_radial(const KernelSpec& spec, double t, double r) {
    const double s = 1.0 + t * t;
    return std::pow(s, -0.25 * spec.d * (spec.p + 2.0)) * std::exp(-r * r * (spec.p + 2.0) / (4.0 * s));
}

double kernel_value(const KernelSpec& spec, double t, const Point& x) {
    double r2 = 0.0;
    for (int a = 0; a < spec.d; ++a) r2 += x[a] * x[a];
    return kernel_value_radial(spec, t, std::sqrt(r2));
}

double kernel_time_integral(const KernelSpec& spec, double rho, double rel_tol) {
    check_spec(spec.d, spec.p);
    auto f = [&](double t) { return kernel_value_radial(spec, t, rho); };
    const auto r = require(special::integrate_to_infinity(f, 0.0, {1e-300, rel_tol, 4000}), "kernel time integral");
    return 2.0 * r.value;  // even in t
}

double quad_lambda(int d, double p, double tol) {
    check_spec(d, p);
    if (!(tol >= 1e-10)) throw std::invalid_argument("quad_lambda: tol must be >= 1e-10");
    const double area = sphere_area(d);
    // Outer: time. Inner: radial x integral of the Gaussian factor.
    auto spatial = [&](double t) {
        const double s = 1.0 + t * t;
        const double beta = (p + 2.0) / (4.0 * s);
        return std::pow(s, -0.25 * d * (p + 2.0)) * area * radial_gaussian_tail(d, beta, 0.0, 0.01 * tol);
    };
    // t = tan(theta). For small dp the time integrand decays only like
    // t^{-dp/2}, which leaves an integrable singularity at theta = pi/2;
    // tanh-sinh absorbs it where Gauss-Kronrod stalls.
    auto angular = [&](double, double from0, double to_end) {
        // Beyond t = 1e100 the remaining mass is O(1e-100^{dp/2-1}).
        if (to_end < 1e-100) return 0.0;
        const double t = from0 < to_end ? std::tan(from0) : 1.0 / std::tan(to_end);
        return spatial(t) * (1.0 + t * t);
    };
    const auto r = require(special::integrate_tanh_sinh(angular, 0.0, 0.5 * pi, 0.1 * tol), "quad_lambda");
    return 2.0 * r.value;
}

double tail_mass(int d, double p, double R, double s) {
    check_spec(d, p);
    if (!(R > 0.0)) throw std::invalid_argument("tail_mass: R must be > 0");
    if (!(s > 0.0 && s < 0.5 * d * p - 1.0))
        throw std::domain_error("tail_mass: s must satisfy 0 < s < dp/2 - 1");
    const double area = sphere_area(d);
    auto spatial = [&](double t) {
        const double sq = 1.0 + t * t;
        const double beta = (p + 2.0) / (4.0 * sq);
        return std::pow(sq, -0.25 * d * (p + 2.0)) * area * radial_gaussian_tail(d, beta, R, 1e-12);
    };
    const auto r = require(special::integrate_to_infinity(spatial, 0.0, {1e-300, 1e-10, 4000}), "tail_mass");
    return 2.0 * r.value;
}

ApproxIdentityResult approx_identity_error(const nls::CoefficientProfile& coeff,
                                           const GaussianProbe& probe, double p, double rel_tol) {
    const int d = probe.dim;
    check_spec(d, p);
    if (!coeff.analytic()) {
        const auto& g = coeff.grid();
        if (g.dim() != d) throw std::invalid_argument("approx_identity_error: dimension mismatch");
        for (int a = 0; a < d; ++a)
            if (std::abs(probe.center[a]) + 6.0 * probe.sigma > g.half_width())
                throw std::invalid_argument("approx_identity_error: probe support exits the coefficient domain");
    }
    const KernelSpec spec{d, p};
    const double sigma = probe.sigma;
    const SphericalDefect defect(coeff, probe);

    ApproxIdentityResult out;
    const double lam = special::lambda_const(d, p).value;
    out.main_term = std::pow(sigma, d + 2) * lam * defect.center_value();

    // sigma^{d+2} int_0^inf rho^{d-1} [sphere defect at sigma rho] M(rho) drho
    auto f = [&](double rho) {
        const double def = defect(sigma * rho);
        if (def == 0.0) return 0.0;
        return std::pow(rho, d - 1) * def * kernel_time_integral(spec, rho, 1e-12);
    };
    const double scale = std::max(std::abs(out.main_term), 1e-300) * rel_tol / std::pow(sigma, d + 2);
    const auto r = require(special::integrate_to_infinity(f, 0.0, {scale, rel_tol, 4000}), "approx_identity_error");
    const double defect_integral = std::pow(sigma, d + 2) * r.value;
    out.integral = out.main_term + defect_integral;
    out.error = std::abs(defect_integral);
    return out;
}

}  // namespace scatrec::gaussian
