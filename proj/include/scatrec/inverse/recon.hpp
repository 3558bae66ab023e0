#pragma once

#include "scatrec/inverse/oracle.hpp"
#include "scatrec/special/lambda.hpp"

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace scatrec::inverse {

// The stored pairing <u+ - u-, u->, unnormalized (no division by ||u-||).
// Throws NonConvergence for a rejected record.
std::complex<double> pairing_functional(const ScatteringRecord& record);

// <S_a(phi) - phi, phi> = -i sigma^{d+2} lambda(d, p) a(x0) + O(sigma^{d+2+s}),
// so a_hat = -Im(pairing) / (sigma^{d+2} lambda(d, p)).
double pairing_to_coefficient(std::complex<double> pairing, double sigma, int dim, double p);

struct PointEstimate {
    Point center{0.0, 0.0, 0.0};
    double sigma = 0.0;
    double a_hat = 0.0;
    std::complex<double> pairing;
    double certificate = 0.0;
    double mass_drift = 0.0;
    bool ok = false;
    std::string error;  // set when !ok
};

// Oracle errors and rejected records propagate as exceptions.
PointEstimate reconstruct_point(const ScatteringOracle& oracle, double sigma, const Point& x0);

// One estimate per centre, in input order regardless of `workers`. Centres
// whose solve fails or is rejected come back with ok = false and the reason.
std::vector<PointEstimate> reconstruct_field(const ScatteringOracle& oracle, double sigma,
                                             const std::vector<Point>& centers, int workers = 1);

struct OperatorNormEstimate {
    double value = 0.0;        // max ratio
    std::size_t argmax = 0;    // member index of the max
    std::vector<double> ratios;  // ||S_a phi - S_b phi||_{H^1} / ||phi||_{H^1}, per member
    // ||S_a phi - S_b phi||_{H^1} ||phi||_{H^-1 dot}: bound on the pairing difference
    std::vector<double> pairing_bounds;
    std::vector<std::complex<double>> pairing_diffs;
};

// max over the family of ||S_a(phi) - S_b(phi)||_{H^1} / ||phi||_{H^1} with
// discrete H^1 norms. A finite family gives a lower bound on the Lipschitz
// constant of S_a - S_b at 0. Throws std::invalid_argument for an empty or
// invalid family or mismatched oracles; NonConvergence for rejected records.
OperatorNormEstimate operator_norm_estimate(const ScatteringOracle& a, const ScatteringOracle& b,
                                            const ProbeFamily& family, int workers = 1);

inline constexpr double kDefaultSigmaMin = 0.05;

struct SigmaChoice {
    double sigma = 0.0;
    double unclamped = 0.0;
    bool clamped = false;
};

// sigma = epsilon (N / M)^{4/9}, raised to sigma_min when smaller.
// Needs N >= 0, M > 0, epsilon in (0, 1] (std::invalid_argument otherwise).
SigmaChoice optimal_sigma(double op_norm, double w1inf_sum, double epsilon,
                          double sigma_min = kDefaultSigmaMin);

// M^{8/9} N^{1/9} + M^{10/9} N^{8/9},  M = w1inf_a + w1inf_b, N = op_norm, with
// unit implicit constant (a shape, not a certified bound).
double stability_bound_rhs(double w1inf_a, double w1inf_b, double op_norm);

struct PowerOptions {
    // Second width for Richardson extrapolation (off when unset).
    std::optional<double> richardson_sigma;
    double richardson_exponent = 2.0;
    // Relative slack outside [lambda(3,4), lambda(3,4/3)] that is clamped
    // rather than rejected.
    double clamp_slack = 0.1;
};

struct PowerEstimate {
    double sigma = 0.0;
    double lambda_hat = 0.0;
    double p_hat = 0.0;
    bool clamped = false;
    std::vector<std::pair<double, double>> lambda_samples;  // (sigma, lambda_hat) per solve
};

// p with lambda(3, p) = lambda_hat. Within clamp_slack outside the range the
// result saturates at the endpoint with the flag set; further out (or
// non-finite) std::domain_error.
special::LambdaInverse power_from_lambda(double lambda_hat, double clamp_slack = 0.1);

// lambda_hat = -Im(pairing) / sigma^5 for the probe at the origin, p_hat its
// lambda preimage. The oracle must be 3-D with a constant coefficient 1.
// Throws std::domain_error when lambda_hat leaves the range by more than the
// clamp slack.
PowerEstimate estimate_power(const ScatteringOracle& oracle, double sigma, const PowerOptions& opt = {});

struct StabilityReport {
    double sup_diff = 0.0;     // max over centres of |a_hat - b_hat|
    double sup_true = 0.0;     // max over centres of |a - b|
    double op_norm_est = 0.0;
    double rhs_bound = 0.0;
    double w1inf_a = 0.0;
    double w1inf_b = 0.0;
    double sigma_used = 0.0;
    std::vector<std::pair<std::string, double>> slopes;  // filled by sweeps
};

// Reconstructs both coefficients on `centers` at `sigma`, estimates the
// operator norm on `family` and evaluates the bound with the certified
// W^{1,inf} bounds of the analytic coefficients.
StabilityReport stability_report(const ScatteringOracle& a, const ScatteringOracle& b, double sigma,
                                 const std::vector<Point>& centers, const ProbeFamily& family,
                                 int workers = 1);

}  // namespace scatrec::inverse
