// AVX2+FMA variants. Compiled with -mavx2 -mfma; only reached after the
// runtime CPU check in dispatch.cpp.
//
// Layout: std::complex<double> is interleaved (re, im), so one __m256d holds
// two complex values. Loops take four complex values per iteration; the
// squared moduli of those four come out of hadd in lane order (0, 2, 1, 3),
// and real per-point arrays are permuted to the same order.

#include "kernels_internal.hpp"
#include "vecmath_avx2.hpp"

#include <cfloat>
#include <cmath>

namespace scatrec::simd::detail {

namespace {

using namespace scatrec::simd::avx2;

inline double* as_doubles(cplx* p) { return reinterpret_cast<double*>(p); }
inline const double* as_doubles(const cplx* p) { return reinterpret_cast<const double*>(p); }

// (a0, a1, a2, a3) -> (a0, a2, a1, a3)
inline __m256d load_hadd_order(const double* a) {
    return _mm256_permute4x64_pd(_mm256_loadu_pd(a), 0xD8);
}

// Complex product of interleaved x with w given as duplicated real/imag parts.
inline __m256d cmul_dup(__m256d x, __m256d wr, __m256d wi) {
    const __m256d xsw = _mm256_permute_pd(x, 0x5);
    return _mm256_fmaddsub_pd(x, wr, _mm256_mul_pd(xsw, wi));
}

inline __m256d abs2_of_four(__m256d x0, __m256d x1) {
    return _mm256_hadd_pd(_mm256_mul_pd(x0, x0), _mm256_mul_pd(x1, x1));
}

inline __m256d abs2_pow_pd(__m256d s, double p) {
    if (p == 2.0) return s;
    if (p == 4.0) return _mm256_mul_pd(s, s);
    const __m256d tiny = _mm256_cmp_pd(s, set1(DBL_MIN), _CMP_LT_OQ);
    const __m256d safe = _mm256_blendv_pd(s, set1(1.0), tiny);
    const __m256d r = exp_pd(_mm256_mul_pd(set1(0.5 * p), log_pd(safe)));
    return _mm256_andnot_pd(tiny, r);
}

inline bool needs_scalar_sincos(__m256d phase) {
    const __m256d mag = _mm256_andnot_pd(set1(-0.0), phase);
    const __m256d big = _mm256_cmp_pd(mag, set1(kSincosLimit), _CMP_NLE_UQ);
    return _mm256_movemask_pd(big) != 0;
}

inline void sincos_checked(__m256d phase, __m256d& s, __m256d& c) {
    if (!needs_scalar_sincos(phase)) {
        sincos_pd(phase, s, c);
        return;
    }
    alignas(32) double ph[4], sv[4], cv[4];
    _mm256_store_pd(ph, phase);
    for (int k = 0; k < 4; ++k) {
        sv[k] = std::sin(ph[k]);
        cv[k] = std::cos(ph[k]);
    }
    s = _mm256_load_pd(sv);
    c = _mm256_load_pd(cv);
}

inline double hsum(__m256d v) {
    alignas(32) double t[4];
    _mm256_store_pd(t, v);
    return (t[0] + t[1]) + (t[2] + t[3]);
}

void multiply_avx2(cplx* x, const cplx* m, std::size_t n) {
    double* xd = as_doubles(x);
    const double* md = as_doubles(m);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        const __m256d mv = _mm256_loadu_pd(md + 2 * i);
        const __m256d mr = _mm256_movedup_pd(mv);
        const __m256d mi = _mm256_permute_pd(mv, 0xF);
        _mm256_storeu_pd(xd + 2 * i, cmul_dup(xv, mr, mi));
    }
    for (; i < n; ++i) x[i] *= m[i];
}

void dispersion_avx2(cplx* x, const double* k2, double t, std::size_t n) {
    double* xd = as_doubles(x);
    const __m256d tv = set1(t);
    const __m256d sign = set1(-0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d phase = _mm256_mul_pd(tv, _mm256_loadu_pd(k2 + i));
        __m256d s, c;
        sincos_checked(phase, s, c);
        s = _mm256_xor_pd(s, sign);  // exp(-i phase)
        const __m256d x0 = _mm256_loadu_pd(xd + 2 * i);
        const __m256d x1 = _mm256_loadu_pd(xd + 2 * i + 4);
        const __m256d c0 = _mm256_permute4x64_pd(c, 0x50);
        const __m256d c1 = _mm256_permute4x64_pd(c, 0xFA);
        const __m256d s0 = _mm256_permute4x64_pd(s, 0x50);
        const __m256d s1 = _mm256_permute4x64_pd(s, 0xFA);
        _mm256_storeu_pd(xd + 2 * i, cmul_dup(x0, c0, s0));
        _mm256_storeu_pd(xd + 2 * i + 4, cmul_dup(x1, c1, s1));
    }
    for (; i < n; ++i) {
        const double phase = t * k2[i];
        x[i] *= cplx(std::cos(phase), -std::sin(phase));
    }
}

void nonlinear_kick_avx2(cplx* x, const double* a, double theta, double p, std::size_t n) {
    double* xd = as_doubles(x);
    const __m256d th = set1(theta);
    const __m256d sign = set1(-0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d x0 = _mm256_loadu_pd(xd + 2 * i);
        const __m256d x1 = _mm256_loadu_pd(xd + 2 * i + 4);
        const __m256d m = abs2_pow_pd(abs2_of_four(x0, x1), p);
        const __m256d phase = _mm256_mul_pd(_mm256_mul_pd(th, load_hadd_order(a + i)), m);
        __m256d s, c;
        sincos_checked(phase, s, c);
        s = _mm256_xor_pd(s, sign);
        _mm256_storeu_pd(xd + 2 * i,
                         cmul_dup(x0, _mm256_unpacklo_pd(c, c), _mm256_unpacklo_pd(s, s)));
        _mm256_storeu_pd(xd + 2 * i + 4,
                         cmul_dup(x1, _mm256_unpackhi_pd(c, c), _mm256_unpackhi_pd(s, s)));
    }
    for (; i < n; ++i) {
        const double phase = theta * a[i] * abs2_pow(std::norm(x[i]), p);
        x[i] *= cplx(std::cos(phase), -std::sin(phase));
    }
}

void nonlinearity_avx2(cplx* out, const cplx* x, const double* a, double p, std::size_t n) {
    const double* xd = as_doubles(x);
    double* od = as_doubles(out);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d x0 = _mm256_loadu_pd(xd + 2 * i);
        const __m256d x1 = _mm256_loadu_pd(xd + 2 * i + 4);
        const __m256d f =
            _mm256_mul_pd(load_hadd_order(a + i), abs2_pow_pd(abs2_of_four(x0, x1), p));
        _mm256_storeu_pd(od + 2 * i, _mm256_mul_pd(x0, _mm256_unpacklo_pd(f, f)));
        _mm256_storeu_pd(od + 2 * i + 4, _mm256_mul_pd(x1, _mm256_unpackhi_pd(f, f)));
    }
    for (; i < n; ++i) out[i] = (a[i] * abs2_pow(std::norm(x[i]), p)) * x[i];
}

void axpy_avx2(cplx* y, cplx alpha, const cplx* x, std::size_t n) {
    double* yd = as_doubles(y);
    const double* xd = as_doubles(x);
    const __m256d ar = set1(alpha.real());
    const __m256d ai = set1(alpha.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
        _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(yv, cmul_dup(xv, ar, ai)));
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

double sum_abs2_avx2(const cplx* x, std::size_t n) {
    const double* xd = as_doubles(x);
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d x0 = _mm256_loadu_pd(xd + 2 * i);
        const __m256d x1 = _mm256_loadu_pd(xd + 2 * i + 4);
        acc0 = _mm256_fmadd_pd(x0, x0, acc0);
        acc1 = _mm256_fmadd_pd(x1, x1, acc1);
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += std::norm(x[i]);
    return s;
}

double sum_weighted_abs2_avx2(const cplx* x, const double* w, std::size_t n) {
    const double* xd = as_doubles(x);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d s = abs2_of_four(_mm256_loadu_pd(xd + 2 * i), _mm256_loadu_pd(xd + 2 * i + 4));
        acc = _mm256_fmadd_pd(load_hadd_order(w + i), s, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += w[i] * std::norm(x[i]);
    return s;
}

double sum_abs_pow_avx2(const cplx* x, double r, std::size_t n) {
    const double* xd = as_doubles(x);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d s = abs2_of_four(_mm256_loadu_pd(xd + 2 * i), _mm256_loadu_pd(xd + 2 * i + 4));
        acc = _mm256_add_pd(acc, abs2_pow_pd(s, r));
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += abs2_pow(std::norm(x[i]), r);
    return s;
}

double sum_weighted_abs_pow_avx2(const cplx* x, const double* a, double r, std::size_t n) {
    const double* xd = as_doubles(x);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d s = abs2_of_four(_mm256_loadu_pd(xd + 2 * i), _mm256_loadu_pd(xd + 2 * i + 4));
        acc = _mm256_fmadd_pd(load_hadd_order(a + i), abs2_pow_pd(s, r), acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += a[i] * abs2_pow(std::norm(x[i]), r);
    return s;
}

double max_abs_avx2(const cplx* x, std::size_t n) {
    const double* xd = as_doubles(x);
    __m256d m = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d s = abs2_of_four(_mm256_loadu_pd(xd + 2 * i), _mm256_loadu_pd(xd + 2 * i + 4));
        m = _mm256_max_pd(m, s);
    }
    alignas(32) double t[4];
    _mm256_store_pd(t, m);
    double best = std::max(std::max(t[0], t[1]), std::max(t[2], t[3]));
    for (; i < n; ++i) best = std::max(best, std::norm(x[i]));
    return std::sqrt(best);
}

cplx inner_avx2(const cplx* x, const cplx* y, std::size_t n) {
    const double* xd = as_doubles(x);
    const double* yd = as_doubles(y);
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
        acc_re = _mm256_fmadd_pd(xv, yv, acc_re);
        acc_im = _mm256_fmadd_pd(xv, _mm256_permute_pd(yv, 0x5), acc_im);
    }
    alignas(32) double r[4], m[4];
    _mm256_store_pd(r, acc_re);
    _mm256_store_pd(m, acc_im);
    double re = (r[0] + r[1]) + (r[2] + r[3]);
    // acc_im lanes hold (xr*yi, xi*yr); imag part of x*conj(y) is xi*yr - xr*yi
    double im = (m[1] + m[3]) - (m[0] + m[2]);
    for (; i < n; ++i) {
        re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
        im += x[i].imag() * y[i].real() - x[i].real() * y[i].imag();
    }
    return {re, im};
}

}  // namespace

const KernelTable& avx2_table() {
    static const KernelTable table{
        "avx2",
        multiply_avx2,
        dispersion_avx2,
        nonlinear_kick_avx2,
        nonlinearity_avx2,
        axpy_avx2,
        sum_abs2_avx2,
        sum_weighted_abs2_avx2,
        sum_abs_pow_avx2,
        sum_weighted_abs_pow_avx2,
        max_abs_avx2,
        inner_avx2,
    };
    return table;
}

}  // namespace scatrec::simd::detail
