#pragma once

#include "scatrec/spectral/grid.hpp"

#include <optional>
#include <string>
#include <vector>

namespace scatrec::nls {

using spectral::Point;

// One localized term of an analytic coefficient.
//   gaussian: amplitude * exp(-|x - center|^2 / width^2)
//   hat:      amplitude * max(0, 1 - |x - center| / width)
struct CoefficientTerm {
    enum class Kind { gaussian, hat };
    Kind kind = Kind::gaussian;
    double amplitude = 0.0;
    Point center{0.0, 0.0, 0.0};
    double width = 1.0;
};

// a(x) = constant + sum of terms, with exact evaluation and certified
// W^{1,inf} bounds.
class AnalyticCoefficient {
public:
    AnalyticCoefficient() = default;
    explicit AnalyticCoefficient(double constant) : constant_(constant) {}

    AnalyticCoefficient& add(CoefficientTerm term);
    // a + h g
    AnalyticCoefficient plus(const AnalyticCoefficient& g, double h) const;
    // x -> a(x - shift)
    AnalyticCoefficient translated(const Point& shift) const;

    double operator()(const Point& x) const;
    double sup_bound() const;
    double lip_bound() const;

    double constant() const { return constant_; }
    const std::vector<CoefficientTerm>& terms() const { return terms_; }
    bool is_constant() const { return terms_.empty(); }

private:
    double constant_ = 0.0;
    std::vector<CoefficientTerm> terms_;
};

// The coefficient sampled on a grid, with bounds that dominate the samples:
// sup_norm >= max |a| and lip_norm >= max finite-difference slope.
// If built from an analytic description, point evaluation is exact; otherwise
// it is periodic multilinear interpolation of the samples.
class CoefficientProfile {
public:
    CoefficientProfile() = default;

    static CoefficientProfile from_analytic(const spectral::SpectralGrid& grid,
                                            const AnalyticCoefficient& a);
    // Grid samples only. Bounds are the measured max and the max
    // finite-difference slope times `slack` (>= 1).
    static CoefficientProfile from_samples(const spectral::SpectralGrid& grid,
                                           std::vector<double> values, double slack = 1.1);

    const spectral::SpectralGrid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    double sup_norm() const { return sup_norm_; }
    double lip_norm() const { return lip_norm_; }
    double w1inf_norm() const { return sup_norm_ + lip_norm_; }
    const std::optional<AnalyticCoefficient>& analytic() const { return analytic_; }
    bool is_zero() const { return is_zero_; }

    double value_at(const Point& x) const;
    // Same profile resampled on another grid.
    CoefficientProfile resampled(const spectral::SpectralGrid& grid) const;

private:
    spectral::SpectralGrid grid_;
    std::vector<double> values_;
    double sup_norm_ = 0.0;
    double lip_norm_ = 0.0;
    bool is_zero_ = true;
    std::optional<AnalyticCoefficient> analytic_;
};

// Largest forward-difference slope of the samples (per-axis differences
// combined in the Euclidean norm).
double finite_difference_lipschitz(const spectral::SpectralGrid& grid,
                                   const std::vector<double>& values);

}  // namespace scatrec::nls
