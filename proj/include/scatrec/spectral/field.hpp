#pragma once

#include "scatrec/spectral/grid.hpp"

#include <complex>
#include <cstddef>
#include <functional>
#include <new>
#include <span>
#include <vector>

namespace scatrec::spectral {

using cplx = std::complex<double>;

// SIMD-aligned storage (FFTW plans are made against this alignment).
template <class T>
struct AlignedAllocator {
    using value_type = T;
    static constexpr std::align_val_t alignment{64};

    AlignedAllocator() noexcept = default;
    template <class U>
    AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

    T* allocate(std::size_t n) {
        return static_cast<T*>(::operator new(n * sizeof(T), alignment));
    }
    void deallocate(T* p, std::size_t) noexcept { ::operator delete(p, alignment); }

    template <class U>
    bool operator==(const AlignedAllocator<U>&) const noexcept {
        return true;
    }
};

template <class T>
using AlignedVector = std::vector<T, AlignedAllocator<T>>;

enum class Space { physical, spectral };

// Complex samples on a SpectralGrid, tagged with the representation they
// are in. Spectral values follow the unscaled forward DFT convention.
class ComplexField {
public:
    ComplexField() = default;
    explicit ComplexField(SpectralGrid grid, Space space = Space::physical);

    static ComplexField sample(const SpectralGrid& grid, const std::function<cplx(const Point&)>& f);

    const SpectralGrid& grid() const { return grid_; }
    Space space() const { return space_; }
    void set_space(Space s) { space_ = s; }

    std::size_t size() const { return values_.size(); }
    std::span<cplx> values() { return values_; }
    std::span<const cplx> values() const { return values_; }
    cplx& operator[](std::size_t i) { return values_[i]; }
    const cplx& operator[](std::size_t i) const { return values_[i]; }

    ComplexField& operator+=(const ComplexField& o);
    ComplexField& operator-=(const ComplexField& o);
    ComplexField& operator*=(cplx s);

private:
    SpectralGrid grid_;
    AlignedVector<cplx> values_;
    Space space_ = Space::physical;
};

ComplexField operator-(ComplexField a, const ComplexField& b);
ComplexField operator+(ComplexField a, const ComplexField& b);

// Throws std::invalid_argument if the fields live on different grids or in
// different spaces.
void require_compatible(const ComplexField& a, const ComplexField& b, const char* what);
void require_space(const ComplexField& f, Space s, const char* what);

}  // namespace scatrec::spectral
