#pragma once
// Four-lane double precision exp/log/sincos for AVX2+FMA. Polynomials are the
// Cephes minimax sets (exp.c, log.c, sin.c); sincos reduces by pi/2 with a
// three-part Cody-Waite split, exact for |x| < 2^20 * pi/2.
//
// Only include from translation units compiled with -mavx2 -mfma.

#include <immintrin.h>

namespace scatrec::simd::avx2 {

inline __m256d set1(double v) { return _mm256_set1_pd(v); }

inline __m256d polevl(__m256d x, const double* c, int n) {
    __m256d r = set1(c[0]);
    for (int i = 1; i <= n; ++i) r = _mm256_fmadd_pd(r, x, set1(c[i]));
    return r;
}

// 2^n for integral n in [-1022, 1023] held as doubles.
inline __m256d exp2_int(__m256d n) {
    const __m128i n32 = _mm256_cvtpd_epi32(n);
    __m256i n64 = _mm256_cvtepi32_epi64(n32);
    n64 = _mm256_add_epi64(n64, _mm256_set1_epi64x(1023));
    n64 = _mm256_slli_epi64(n64, 52);
    return _mm256_castsi256_pd(n64);
}

inline __m256d exp_pd(__m256d x) {
    static constexpr double P[] = {1.26177193074810590878E-4, 3.02994407707441961300E-2,
                                   9.99999999999999999910E-1};
    static constexpr double Q[] = {3.00198505138664455042E-6, 2.52448340349684104192E-3,
                                   2.27265548208155028766E-1, 2.00000000000000000009E0};
    const __m256d underflow = _mm256_cmp_pd(x, set1(-708.39), _CMP_LT_OQ);
    x = _mm256_min_pd(_mm256_max_pd(x, set1(-708.0)), set1(709.0));
    const __m256d fx = _mm256_round_pd(_mm256_mul_pd(x, set1(1.4426950408889634073599)),
                                       _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    x = _mm256_fnmadd_pd(fx, set1(6.93145751953125E-1), x);
    x = _mm256_fnmadd_pd(fx, set1(1.42860682030941723212E-6), x);
    const __m256d xx = _mm256_mul_pd(x, x);
    const __m256d px = _mm256_mul_pd(x, polevl(xx, P, 2));
    const __m256d qx = polevl(xx, Q, 3);
    __m256d r = _mm256_div_pd(px, _mm256_sub_pd(qx, px));
    r = _mm256_fmadd_pd(set1(2.0), r, set1(1.0));
    r = _mm256_mul_pd(r, exp2_int(fx));
    return _mm256_andnot_pd(underflow, r);
}

// Natural log for positive normal inputs.
inline __m256d log_pd(__m256d x) {
    static constexpr double P[] = {1.01875663804580931796E-4, 4.97494994976747001425E-1,
                                   4.70579119878881725854E0,  1.44989225341610930846E1,
                                   1.79368678507819816313E1,  7.70838733755885391666E0};
    static constexpr double Q[] = {1.0,
                                   1.12873587189167450590E1,
                                   4.52279145837532221105E1,
                                   8.29875266912776603211E1,
                                   7.11544750618563894466E1,
                                   2.31251620126765340583E1};
    const __m256i bits = _mm256_castpd_si256(x);
    // biased exponent as a double via the 2^52 magic
    const __m256i biased = _mm256_srli_epi64(bits, 52);
    const __m256d magic = set1(4503599627370496.0);
    __m256d e = _mm256_sub_pd(
        _mm256_castsi256_pd(_mm256_or_si256(biased, _mm256_castpd_si256(magic))), magic);
    e = _mm256_sub_pd(e, set1(1022.0));
    // mantissa in [0.5, 1)
    const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
    const __m256i half_bits = _mm256_set1_epi64x(0x3FE0000000000000LL);
    __m256d m = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, mant_mask), half_bits));

    const __m256d small = _mm256_cmp_pd(m, set1(0.70710678118654752440), _CMP_LT_OQ);
    e = _mm256_sub_pd(e, _mm256_and_pd(small, set1(1.0)));
    m = _mm256_add_pd(m, _mm256_and_pd(small, m));
    const __m256d f = _mm256_sub_pd(m, set1(1.0));

    const __m256d z = _mm256_mul_pd(f, f);
    __m256d y = _mm256_div_pd(polevl(f, P, 5), polevl(f, Q, 5));
    y = _mm256_mul_pd(_mm256_mul_pd(f, z), y);
    y = _mm256_fnmadd_pd(e, set1(2.121944400546905827679e-4), y);
    y = _mm256_fnmadd_pd(set1(0.5), z, y);
    __m256d r = _mm256_add_pd(f, y);
    r = _mm256_fmadd_pd(e, set1(0.693359375), r);
    return r;
}

// Largest |x| for which the pi/2 reduction below is exact.
inline constexpr double kSincosLimit = 1.0e6;

inline void sincos_pd(__m256d x, __m256d& s_out, __m256d& c_out) {
    static constexpr double S[] = {1.58962301576546568060E-10, -2.50507477628578072866E-8,
                                   2.75573136213857245213E-6,  -1.98412698295895385996E-4,
                                   8.33333333332211858878E-3,  -1.66666666666666307295E-1};
    static constexpr double C[] = {-1.13585365213876817300E-11, 2.08757008419747316778E-9,
                                   -2.75573141792967388112E-7,  2.48015872888517045348E-5,
                                   -1.38888888888730564116E-3,  4.16666666666665929218E-2};
    const __m256d q = _mm256_round_pd(_mm256_mul_pd(x, set1(0.63661977236758134308)),
                                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(q, set1(1.57079632673412561417e+00), x);
    r = _mm256_fnmadd_pd(q, set1(6.07710050630396597660e-11), r);
    r = _mm256_fnmadd_pd(q, set1(2.02226624871116645580e-21), r);

    const __m256d z = _mm256_mul_pd(r, r);
    const __m256d sin_r = _mm256_fmadd_pd(_mm256_mul_pd(r, z), polevl(z, S, 5), r);
    __m256d cos_r = _mm256_mul_pd(_mm256_mul_pd(z, z), polevl(z, C, 5));
    cos_r = _mm256_fnmadd_pd(set1(0.5), z, cos_r);
    cos_r = _mm256_add_pd(cos_r, set1(1.0));

    const __m128i q32 = _mm256_cvtpd_epi32(q);
    const __m256i qi = _mm256_cvtepi32_epi64(q32);
    const __m256i one = _mm256_set1_epi64x(1);
    const __m256i two = _mm256_set1_epi64x(2);
    const __m256d swap =
        _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(qi, one), one));
    const __m256d neg_sin =
        _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(qi, two), two));
    const __m256d neg_cos = _mm256_castsi256_pd(
        _mm256_cmpeq_epi64(_mm256_and_si256(_mm256_add_epi64(qi, one), two), two));
    const __m256d sign = set1(-0.0);

    __m256d s = _mm256_blendv_pd(sin_r, cos_r, swap);
    __m256d c = _mm256_blendv_pd(cos_r, sin_r, swap);
    s = _mm256_xor_pd(s, _mm256_and_pd(neg_sin, sign));
    c = _mm256_xor_pd(c, _mm256_and_pd(neg_cos, sign));
    s_out = s;
    c_out = c;
}

}  // namespace scatrec::simd::avx2
