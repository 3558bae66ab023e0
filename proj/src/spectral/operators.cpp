#include "scatrec/spectral/operators.hpp"

#include "scatrec/simd/kernels.hpp"
#include "scatrec/spectral/fft.hpp"

namespace scatrec::spectral {

void to_spectral_inplace(ComplexField& field) {
    require_space(field, Space::physical, "to_spectral");
    fft_forward(field.values(), field.grid());
    field.set_space(Space::spectral);
}

void from_spectral_inplace(ComplexField& field) {
    require_space(field, Space::spectral, "from_spectral");
    fft_inverse(field.values(), field.grid());
    field.set_space(Space::physical);
}

ComplexField to_spectral(ComplexField field) {
    to_spectral_inplace(field);
    return field;
}

ComplexField from_spectral(ComplexField field) {
    from_spectral_inplace(field);
    return field;
}

ComplexField continuum_spectrum(const ComplexField& spectral) {
    require_space(spectral, Space::spectral, "continuum_spectrum");
    const auto& g = spectral.grid();
    ComplexField out = spectral;
    const double w = g.cell_volume();
    const int n = g.points_per_axis();
    for (std::size_t i = 0; i < out.size(); ++i) {
        const auto idx = g.unflatten(i);
        int parity = 0;
        for (int a = 0; a < g.dim(); ++a) {
            const int k = idx[a] < n / 2 ? idx[a] : idx[a] - n;
            parity += k;
        }
        out[i] *= (parity % 2 == 0 ? w : -w);
    }
    return out;
}

void propagate_spectral(ComplexField& spectral, double t) {
    require_space(spectral, Space::spectral, "propagate_spectral");
    if (t == 0.0) return;
    simd::dispersion(spectral.values(), spectral.grid().xi_squared(), t);
}

void free_propagate_inplace(ComplexField& field, double t) {
    require_space(field, Space::physical, "free_propagate");
    if (t == 0.0) return;
    to_spectral_inplace(field);
    propagate_spectral(field, t);
    from_spectral_inplace(field);
}

ComplexField free_propagate(ComplexField field, double t) {
    free_propagate_inplace(field, t);
    return field;
}

std::complex<double> inner_product(const ComplexField& u, const ComplexField& v) {
    require_compatible(u, v, "inner_product");
    require_space(u, Space::physical, "inner_product");
    return u.grid().cell_volume() * simd::inner(u.values(), v.values());
}

double mass(const ComplexField& u) {
    require_space(u, Space::physical, "mass");
    return u.grid().cell_volume() * simd::sum_abs2(u.values());
}

}  // namespace scatrec::spectral
