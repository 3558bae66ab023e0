#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace scatrec::spectral {

using Point = std::array<double, 3>;

// Periodic box [-L, L)^d sampled with n points per axis, and its dual
// frequency lattice xi_k = pi k / L, k in {-n/2, ..., n/2 - 1}.
//
// Flat index layout is row-major with axis 0 (x_1) fastest:
//   flat = i_0 + n * i_1 + n^2 * i_2.
// Spectral arrays use the FFT ordering along each axis (k = j for j < n/2,
// k = j - n otherwise).
class SpectralGrid {
public:
    SpectralGrid() = default;

    int dim() const { return dim_; }
    int points_per_axis() const { return n_; }
    double half_width() const { return half_width_; }
    double spacing() const { return 2.0 * half_width_ / n_; }
    double cell_volume() const;
    double volume() const;
    std::size_t size() const { return size_; }

    // Physical coordinate of node i along any axis.
    double coordinate(int i) const { return -half_width_ + i * spacing(); }
    // Frequency of FFT-ordered index j along any axis.
    double frequency_at(int j) const;
    // Ascending lattice {pi k / L : k = -n/2 .. n/2-1}.
    std::vector<double> frequencies() const;

    std::array<int, 3> unflatten(std::size_t flat) const;
    Point point(std::size_t flat) const;

    // |xi|^2 over the spectral layout; shared between copies of the grid.
    std::span<const double> xi_squared() const { return *xi2_; }

    bool operator==(const SpectralGrid& o) const {
        return dim_ == o.dim_ && n_ == o.n_ && half_width_ == o.half_width_;
    }

private:
    friend SpectralGrid make_grid(int, int, double);

    int dim_ = 0;
    int n_ = 0;
    double half_width_ = 0.0;
    std::size_t size_ = 0;
    std::shared_ptr<const std::vector<double>> xi2_;
};

// Throws std::invalid_argument unless dim in {1,2,3}, n even and >= 8,
// half_width > 0.
SpectralGrid make_grid(int dim, int points_per_axis, double half_width);

}  // namespace scatrec::spectral
