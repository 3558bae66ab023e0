#pragma once

#include "scatrec/spectral/grid.hpp"

#include <complex>
#include <span>

namespace scatrec::spectral {

// In-place d-dimensional DFTs on the grid layout. Forward is unscaled
// (F_k = sum_j u_j e^{-2 pi i j.k/n}), inverse divides by
// n^d, so inverse(forward(u)) == u.
//
// Plans are created with FFTW_ESTIMATE (bitwise reproducible across runs) and
// cached per thread; planning itself is serialized behind a global mutex.
void fft_forward(std::span<std::complex<double>> data, const SpectralGrid& grid);
void fft_inverse(std::span<std::complex<double>> data, const SpectralGrid& grid);

}  // namespace scatrec::spectral
