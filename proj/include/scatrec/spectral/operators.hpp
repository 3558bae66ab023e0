#pragma once

#include "scatrec/spectral/field.hpp"

namespace scatrec::spectral {

// Physical <-> spectral. Both throw std::invalid_argument on a wrong tag.
ComplexField to_spectral(ComplexField field);
ComplexField from_spectral(ComplexField field);
void to_spectral_inplace(ComplexField& field);
void from_spectral_inplace(ComplexField& field);

// Approximates the continuum transform  u^(xi) = int u(x) e^{-i xi.x} dx
// at the lattice frequencies from a spectral field: h^d (-1)^{k_1+..+k_d} F_k.
ComplexField continuum_spectrum(const ComplexField& spectral);

// e^{it Delta}: multiplies spectral coefficients by e^{-it|xi|^2}.
ComplexField free_propagate(ComplexField field, double t);
void free_propagate_inplace(ComplexField& field, double t);
// Multiplier only, for fields already in spectral space.
void propagate_spectral(ComplexField& spectral, double t);

// Discrete L^2 pairing  h^d sum u conj(v), linear in the first slot.
// Both fields must be physical and share a grid.
std::complex<double> inner_product(const ComplexField& u, const ComplexField& v);
// h^d sum |u|^2.
double mass(const ComplexField& u);

}  // namespace scatrec::spectral
