#pragma once
// Data-parallel inner loops shared by the spectral propagator, the nonlinear
// kick and the norm/pairing reductions. Every kernel has a scalar reference
// variant; wider variants are selected at runtime and must agree with the
// reference to a few ulp (see tests/test_simd_kernels.cpp).

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace scatrec::simd {

using cplx = std::complex<double>;

struct KernelTable {
    const char* name;

    // x[i] *= m[i]
    void (*multiply)(cplx* x, const cplx* m, std::size_t n);
    // x[i] *= exp(-i t k2[i])
    void (*dispersion)(cplx* x, const double* k2, double t, std::size_t n);
    // x[i] *= exp(-i theta a[i] |x[i]|^p)
    void (*nonlinear_kick)(cplx* x, const double* a, double theta, double p, std::size_t n);
    // out[i] = a[i] |x[i]|^p x[i]
    void (*nonlinearity)(cplx* out, const cplx* x, const double* a, double p, std::size_t n);
    // y[i] += alpha x[i]
    void (*axpy)(cplx* y, cplx alpha, const cplx* x, std::size_t n);

    double (*sum_abs2)(const cplx* x, std::size_t n);
    double (*sum_weighted_abs2)(const cplx* x, const double* w, std::size_t n);
    // sum |x[i]|^r, r > 0
    double (*sum_abs_pow)(const cplx* x, double r, std::size_t n);
    // sum a[i] |x[i]|^r, r > 0
    double (*sum_weighted_abs_pow)(const cplx* x, const double* a, double r, std::size_t n);
    double (*max_abs)(const cplx* x, std::size_t n);
    // sum x[i] conj(y[i])
    cplx (*inner)(const cplx* x, const cplx* y, std::size_t n);
};

const KernelTable& scalar_kernels();

// Returns nullptr when the variant was not compiled in or the CPU lacks the
// required instruction set.
const KernelTable* avx2_kernels();

// All variants usable on this machine, scalar first.
std::vector<const KernelTable*> available_kernels();

// The table used by the library. Chosen once: the widest supported variant,
// unless SCATREC_SIMD=scalar (or =avx2) overrides it.
const KernelTable& active_kernels();

// Forces a variant by name ("scalar", "avx2"). Returns false if unavailable.
// Not thread-safe with respect to concurrent kernel calls.
bool select_kernels(std::string_view name);

// Span facades over the active table.
inline void multiply(std::span<cplx> x, std::span<const cplx> m) {
    active_kernels().multiply(x.data(), m.data(), x.size());
}
inline void dispersion(std::span<cplx> x, std::span<const double> k2, double t) {
    active_kernels().dispersion(x.data(), k2.data(), t, x.size());
}
inline void nonlinear_kick(std::span<cplx> x, std::span<const double> a, double theta, double p) {
    active_kernels().nonlinear_kick(x.data(), a.data(), theta, p, x.size());
}
inline void nonlinearity(std::span<cplx> out, std::span<const cplx> x, std::span<const double> a,
                         double p) {
    active_kernels().nonlinearity(out.data(), x.data(), a.data(), p, x.size());
}
inline void axpy(std::span<cplx> y, cplx alpha, std::span<const cplx> x) {
    active_kernels().axpy(y.data(), alpha, x.data(), y.size());
}
inline double sum_abs2(std::span<const cplx> x) { return active_kernels().sum_abs2(x.data(), x.size()); }
inline double sum_weighted_abs2(std::span<const cplx> x, std::span<const double> w) {
    return active_kernels().sum_weighted_abs2(x.data(), w.data(), x.size());
}
inline double sum_abs_pow(std::span<const cplx> x, double r) {
    return active_kernels().sum_abs_pow(x.data(), r, x.size());
}
inline double sum_weighted_abs_pow(std::span<const cplx> x, std::span<const double> a, double r) {
    return active_kernels().sum_weighted_abs_pow(x.data(), a.data(), r, x.size());
}
inline double max_abs(std::span<const cplx> x) { return active_kernels().max_abs(x.data(), x.size()); }
inline cplx inner(std::span<const cplx> x, std::span<const cplx> y) {
    return active_kernels().inner(x.data(), y.data(), x.size());
}

}  // namespace scatrec::simd
