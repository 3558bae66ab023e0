#include "kernels_internal.hpp"

#include <cmath>

namespace scatrec::simd::detail {

namespace {

void multiply_scalar(cplx* x, const cplx* m, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= m[i];
}

void dispersion_scalar(cplx* x, const double* k2, double t, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double phase = t * k2[i];
        x[i] *= cplx(std::cos(phase), -std::sin(phase));
    }
}

void nonlinear_kick_scalar(cplx* x, const double* a, double theta, double p, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double phase = theta * a[i] * abs2_pow(std::norm(x[i]), p);
        x[i] *= cplx(std::cos(phase), -std::sin(phase));
    }
}

void nonlinearity_scalar(cplx* out, const cplx* x, const double* a, double p, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = (a[i] * abs2_pow(std::norm(x[i]), p)) * x[i];
}

void axpy_scalar(cplx* y, cplx alpha, const cplx* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double sum_abs2_scalar(const cplx* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::norm(x[i]);
    return s;
}

double sum_weighted_abs2_scalar(const cplx* x, const double* w, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += w[i] * std::norm(x[i]);
    return s;
}

double sum_abs_pow_scalar(const cplx* x, double r, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += abs2_pow(std::norm(x[i]), r);
    return s;
}

double sum_weighted_abs_pow_scalar(const cplx* x, const double* a, double r, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * abs2_pow(std::norm(x[i]), r);
    return s;
}

double max_abs_scalar(const cplx* x, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::norm(x[i]));
    return std::sqrt(m);
}

cplx inner_scalar(const cplx* x, const cplx* y, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
        im += x[i].imag() * y[i].real() - x[i].real() * y[i].imag();
    }
    return {re, im};
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable table{
        "scalar",
        multiply_scalar,
        dispersion_scalar,
        nonlinear_kick_scalar,
        nonlinearity_scalar,
        axpy_scalar,
        sum_abs2_scalar,
        sum_weighted_abs2_scalar,
        sum_abs_pow_scalar,
        sum_weighted_abs_pow_scalar,
        max_abs_scalar,
        inner_scalar,
    };
    return table;
}

}  // namespace scatrec::simd::detail
