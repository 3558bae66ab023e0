#pragma once

#include "scatrec/gaussian/probe.hpp"
#include "scatrec/nls/coefficient.hpp"

namespace scatrec::gaussian {

// K(t, x) = (1+t^2)^{-d(p+2)/4} exp(-|x|^2 (p+2) / (4 (1+t^2))).
// |e^{it Delta} phi_{sigma,x0}(x)|^{p+2} = K(t/sigma^2, (x-x0)/sigma).
struct KernelSpec {
    int d = 3;
    double p = 2.0;
};

double kernel_value(const KernelSpec& spec, double t, const Point& x);
double kernel_value_radial(const KernelSpec& spec, double t, double r);

// M(rho) = int_R K(t, rho e) dt for a unit vector e, by adaptive quadrature.
double kernel_time_integral(const KernelSpec& spec, double rho, double rel_tol = 1e-12);

// int_R int_{R^d} K dx dt by nested adaptive quadrature (radial in x, tan
// map in t). Throws NonConvergence when the refinement budget runs out.
// tol is relative, >= 1e-10.
double quad_lambda(int d, double p, double tol);

// int_R int_{|x| > R} K dx dt. Requires R > 0 and 0 < s < dp/2 - 1, where s
// is the decay order being probed (the value itself does not depend on s).
double tail_mass(int d, double p, double R, double s);

struct ApproxIdentityResult {
    double integral = 0.0;    // int int a |e^{it Delta} phi|^{p+2} dx dt
    double main_term = 0.0;   // sigma^{d+2} lambda(d,p) a(x0)
    double error = 0.0;       // |integral - main_term|
};

// Evaluates the approximate-identity defect for a coefficient and a probe.
// The defect integrand (a(x) - a(x0)) K is integrated directly so constant
// coefficients give exactly zero. Spherical averages of a use a product
// Gauss-Legendre x trapezoid rule on S^2 (exact for radial a about x0).
// Grid-only profiles are interpolated and must cover the probe:
// |x0_a| + 6 sigma <= L on every axis, else std::invalid_argument.
ApproxIdentityResult approx_identity_error(const nls::CoefficientProfile& coeff,
                                           const GaussianProbe& probe, double p,
                                           double rel_tol = 1e-10);

}  // namespace scatrec::gaussian
