#pragma once

#include "scatrec/simd/kernels.hpp"

#include <cmath>

namespace scatrec::simd::detail {

// |z|^p given s = |z|^2. Exact fast paths for the even integer powers the
// solver hits most often; s == 0 maps to 0 for every p > 0.
inline double abs2_pow(double s, double p) {
    if (p == 2.0) return s;
    if (p == 4.0) return s * s;
    if (s == 0.0) return 0.0;
    return std::pow(s, 0.5 * p);
}

const KernelTable& scalar_table();

#if defined(SCATREC_HAVE_AVX2)
const KernelTable& avx2_table();
#endif

}  // namespace scatrec::simd::detail
