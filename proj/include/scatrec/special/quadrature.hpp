#pragma once

#include <cstddef>
#include <functional>

namespace scatrec::special {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;      // estimated absolute error
    std::size_t evaluations = 0;
    bool converged = false;
};

struct QuadOptions {
    double abs_tol = 0.0;
    double rel_tol = 1e-10;
    std::size_t max_intervals = 2000;
};

// Globally adaptive Gauss-Kronrod (7/15) on a finite [a, b]: the panel with
// the largest error estimate is bisected until the summed estimate meets
// max(abs_tol, rel_tol |I|) or the panel budget runs out (converged = false).
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& opt = {});

// [a, inf) through x = a + tan(theta), theta in [0, pi/2). Suits integrands
// with algebraic decay; f must tend to zero faster than 1/x.
QuadResult integrate_to_infinity(const std::function<double(double)>& f, double a,
                                 const QuadOptions& opt = {});

// Double-exponential (tanh-sinh) rule on [a, b] for integrable endpoint
// singularities. f receives (x, x - a, b - x) with the distances computed
// without cancellation so the integrand can be evaluated accurately near
// either end. Levels are refined until successive estimates agree to tol
// (relative) or 12 levels are used.
QuadResult integrate_tanh_sinh(const std::function<double(double, double, double)>& f, double a,
                               double b, double tol = 1e-12);

}  // namespace scatrec::special
