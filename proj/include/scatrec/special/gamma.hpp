#pragma once

namespace scatrec::special {

// ln Gamma(x) for x > 0 (Lanczos, g = 7, nine terms; reflection below 1/2).
// Throws std::domain_error for x <= 0 or NaN.
double log_gamma(double x);

// psi(x) = Gamma'(x)/Gamma(x) for x > 0: upward recurrence to x >= 10, then
// the asymptotic series through the x^{-14} term.
double digamma(double x);

// B(a, b) = Gamma(a)Gamma(b)/Gamma(a+b), a, b > 0.
double beta(double a, double b);

}  // namespace scatrec::special
