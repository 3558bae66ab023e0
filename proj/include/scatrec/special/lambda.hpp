#pragma once

#include <numbers>

namespace scatrec::special {

// Admissible Strichartz pair and critical exponents for the 3-D problem.
struct ExponentSet {
    double p;
    double q;    // p + 2
    double r;    // 6(p+2) / (3(p+2) - 4)
    double s_c;  // 3/2 - 2/p
    double r_c;  // 3p(p+2) / 4
};

// p in [4/3, 4]; throws std::domain_error otherwise.
ExponentSet scattering_exponents(double p);

struct LambdaValue {
    int d;
    double p;
    double value;
    // d lambda / dp. Available for every d; for d = 3 it agrees with
    // lambda_prime(p).
    double derivative;
};

// Space-time mass of the Gaussian intensity kernel
//   K(t, x) = (1+t^2)^{-d(p+2)/4} exp(-|x|^2 (p+2) / (4(1+t^2))),
// i.e.  lambda(d, p) = pi^{(d+1)/2} (4/(p+2))^{d/2} Gamma(dp/4 - 1/2) / Gamma(dp/4).
// Requires d >= 1 and p > 2/d (std::domain_error otherwise).
LambdaValue lambda_const(int d, double p);

// Closed-form derivative for d = 3:
//   -c (p+2)^{-3/2} G(p) { 3/(2(p+2)) + (3/4)[psi(3p/4) - psi(3p/4 - 1/2)] },
//   G(p) = Gamma(3p/4 - 1/2)/Gamma(3p/4),  c = 8 pi^2.
// p must lie in [4/3, 4].
double lambda_prime(double p);
inline constexpr double kLambdaPrimeC = 8.0 * std::numbers::pi * std::numbers::pi;

// Pointwise lower bound for |lambda'(p)| obtained from Gautschi's inequality
// G(p) > (3p/4)^{-1/2}:  (3c/2) (p+2)^{-5/2} (3p/4)^{-1/2}.
double lambda_prime_floor(double p);

struct LambdaInverse {
    double p;
    bool clamped = false;  // target was outside [lambda(3,4), lambda(3,4/3)]
};

// Unique p in [4/3, 4] with lambda(3, p) = target, by bisection to
// |dp| <= 1e-12. Out-of-range targets saturate at the nearer endpoint and set
// the flag. Throws std::invalid_argument for non-finite targets.
LambdaInverse invert_lambda(double target);

inline constexpr double kPowerMin = 4.0 / 3.0;
inline constexpr double kPowerMax = 4.0;

}  // namespace scatrec::special
