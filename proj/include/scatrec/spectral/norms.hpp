#pragma once

#include "scatrec/spectral/field.hpp"

#include <limits>
#include <utility>
#include <vector>

namespace scatrec::spectral {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// (sum |u|^r h^d)^{1/r}; grid maximum for r = inf (a lower bound on the true
// sup). Throws std::invalid_argument for r < 1 or a spectral field.
double lebesgue_norm(const ComplexField& field, double r);

// Plancherel norm with weights (1+|xi|^2)^{s/2}, or |xi|^s when homogeneous.
// Homogeneous s < 0 requires a vanishing zero mode; otherwise
// std::domain_error is thrown (use the closed-form Gaussian norms instead).
double sobolev_norm(const ComplexField& field, double s, bool homogeneous);

// |nabla|^s u (homogeneous multiplier |xi|^s, s >= 0). Physical in and out.
ComplexField fractional_derivative(const ComplexField& field, double s);

// Pointwise |nabla u| as a real-valued physical field.
ComplexField gradient_modulus(const ComplexField& field);

// (int ||u(t)||_{L^r}^q dt)^{1/q} with the trapezoid rule in t; sup over
// snapshots for q = inf. Needs >= 2 snapshots with strictly increasing times.
double spacetime_norm(const std::vector<std::pair<double, ComplexField>>& snapshots, double q,
                      double r);

// Same composition from precomputed per-time spatial norms.
double spacetime_norm_from_profile(const std::vector<double>& times,
                                   const std::vector<double>& spatial_norms, double q);

}  // namespace scatrec::spectral
