#include "scatrec/spectral/field.hpp"

#include "scatrec/simd/kernels.hpp"

#include <stdexcept>
#include <string>

namespace scatrec::spectral {

ComplexField::ComplexField(SpectralGrid grid, Space space)
    : grid_(std::move(grid)), values_(grid_.size(), cplx{0.0, 0.0}), space_(space) {}

ComplexField ComplexField::sample(const SpectralGrid& grid,
                                  const std::function<cplx(const Point&)>& f) {
    ComplexField out(grid, Space::physical);
    for (std::size_t i = 0; i < out.size(); ++i) out.values_[i] = f(grid.point(i));
    return out;
}

ComplexField& ComplexField::operator+=(const ComplexField& o) {
    require_compatible(*this, o, "ComplexField::operator+=");
    simd::axpy(values_, cplx{1.0, 0.0}, o.values_);
    return *this;
}

ComplexField& ComplexField::operator-=(const ComplexField& o) {
    require_compatible(*this, o, "ComplexField::operator-=");
    simd::axpy(values_, cplx{-1.0, 0.0}, o.values_);
    return *this;
}

ComplexField& ComplexField::operator*=(cplx s) {
    for (auto& v : values_) v *= s;
    return *this;
}

ComplexField operator-(ComplexField a, const ComplexField& b) {
    a -= b;
    return a;
}

ComplexField operator+(ComplexField a, const ComplexField& b) {
    a += b;
    return a;
}

void require_compatible(const ComplexField& a, const ComplexField& b, const char* what) {
    if (!(a.grid() == b.grid()))
        throw std::invalid_argument(std::string(what) + ": fields live on different grids");
    if (a.space() != b.space())
        throw std::invalid_argument(std::string(what) + ": fields are in different spaces");
}

void require_space(const ComplexField& f, Space s, const char* what) {
    if (f.space() != s)
        throw std::invalid_argument(std::string(what) + ": field must be " +
                                    (s == Space::physical ? "physical" : "spectral"));
}

}  // namespace scatrec::spectral
