#pragma once

#include "scatrec/spectral/field.hpp"

#include <complex>

namespace scatrec::gaussian {

using spectral::cplx;
using spectral::Point;

// phi(x) = exp(-|x - x0|^2 / (4 sigma^2)) in R^d.
struct GaussianProbe {
    double sigma = 1.0;
    Point center{0.0, 0.0, 0.0};
    int dim = 3;
};

// Validates sigma > 0, dim in {1,2,3}; throws std::invalid_argument.
GaussianProbe make_probe(double sigma, const Point& center, int dim);

// Largest value of phi on the box boundary |x_a| = L.
double probe_boundary_value(const GaussianProbe& probe, double half_width);

// Samples phi on the grid. Throws std::invalid_argument when the boundary
// value exceeds 1e-12 (probe too wide or too close to the edge).
inline constexpr double kProbeBoundaryTol = 1e-12;
spectral::ComplexField probe_field(const GaussianProbe& probe, const spectral::SpectralGrid& grid);

// e^{it Delta} phi at x:  [sigma^2/(sigma^2+it)]^{d/2} exp(-|x-x0|^2 / (4(sigma^2+it))),
// principal branch.
cplx probe_free_evolution(const GaussianProbe& probe, double t, const Point& x);

// The closed form sampled on a grid. With `periodize`, the sum over all
// periodic images x + 2L m is taken (until the images drop below 1e-17 of the
// peak), which is the exact free evolution on the torus.
spectral::ComplexField probe_free_field(const GaussianProbe& probe, const spectral::SpectralGrid& grid,
                                        double t, bool periodize);

// Continuum norms of phi.
double probe_l2_norm(const GaussianProbe& probe);
// ||phi||_{H^s} (inhomogeneous, by radial quadrature) or ||phi||_{H^s dot}
// (homogeneous, closed form; needs s > -d/2).
double probe_sobolev_norm(const GaussianProbe& probe, double s, bool homogeneous);
double probe_h1_norm(const GaussianProbe& probe);
// ||e^{it Delta} phi||_{L^r}, r in [1, inf].
double probe_free_lebesgue_norm(const GaussianProbe& probe, double t, double r);

}  // namespace scatrec::gaussian
