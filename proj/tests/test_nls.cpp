#include "doctest.h"
#include "scatrec/errors.hpp"
#include "scatrec/gaussian/kernel.hpp"
#include "scatrec/gaussian/probe.hpp"
#include "scatrec/nls/scattering.hpp"
#include "scatrec/nls/solver.hpp"
#include "scatrec/special/lambda.hpp"
#include "scatrec/special/quadrature.hpp"
#include "scatrec/spectral/norms.hpp"
#include "scatrec/spectral/operators.hpp"

#include <cmath>
#include <numbers>

using namespace scatrec;
using namespace scatrec::nls;
using spectral::make_grid;

namespace {

double rel_l2(const spectral::ComplexField& a, const spectral::ComplexField& b) {
    return std::sqrt(spectral::mass(a - b) / spectral::mass(b));
}

SolveSpec spec_for(const spectral::SpectralGrid& g, const AnalyticCoefficient& a, double p, double T, double dt) {
    SolveSpec s;
    s.p = p;
    s.coeff = CoefficientProfile::from_analytic(g, a);
    s.T = T;
    s.dt = dt;
    return s;
}

// sigma-scaled configuration: L = 16 sigma, n = 64, T = 16 sigma^2, dt = sigma^2 / 20
struct Scaled {
    spectral::SpectralGrid grid;
    SolveSpec spec;
    spectral::ComplexField probe;
};

Scaled scaled(double sigma, const AnalyticCoefficient& a, double p, int d = 3) {
    Scaled s;
    const int n = d == 3 ? 64 : 1024;
    const double ell = d == 3 ? 16.0 : 256.0;
    s.grid = make_grid(d, n, ell * sigma);
    s.spec = spec_for(s.grid, a, p, 16.0 * sigma * sigma, 0.05 * sigma * sigma);
    s.probe = gaussian::probe_field(gaussian::make_probe(sigma, {0, 0, 0}, d), s.grid);
    return s;
}

}  // namespace

TEST_CASE("spec validation") {
    const auto g = make_grid(3, 16, 2.0);
    auto s = spec_for(g, AnalyticCoefficient(1.0), 2.0, 1.0, 0.01);
    CHECK_NOTHROW(validate(s, g));
    s.dt = 0.03;
    CHECK_THROWS_AS(validate(s, g), std::invalid_argument);
    s.dt = 0.01;
    s.p = 5.0;
    CHECK_THROWS_AS(validate(s, g), std::invalid_argument);
    s.p = 2.0;
    CHECK_THROWS_AS(validate(s, make_grid(3, 16, 3.0)), std::invalid_argument);
    const auto g1 = make_grid(1, 16, 2.0);
    auto s1 = spec_for(g1, AnalyticCoefficient(1.0), 5.0, 1.0, 0.01);
    CHECK_NOTHROW(validate(s1, g1));
    s1.p = 1.5;
    CHECK_THROWS_AS(validate(s1, g1), std::invalid_argument);
}

TEST_CASE("Strang step basics") {
    const auto g = make_grid(3, 32, 5.0);
    const auto u = gaussian::probe_field(gaussian::make_probe(0.4, {0.1, 0, -0.2}, 3), g);
    const auto zero = CoefficientProfile::from_analytic(g, AnalyticCoefficient(0.0));
    const auto one = CoefficientProfile::from_analytic(g, AnalyticCoefficient(1.0));
    CHECK(rel_l2(strang_step(u, 0.01, zero, 2.0), spectral::free_propagate(u, 0.01)) <= 1e-14);
    for (double p : {4.0 / 3.0, 2.0, 4.0}) {
        const auto v = strang_step(u, 0.01, one, p);
        CHECK(std::abs(spectral::mass(v) / spectral::mass(u) - 1.0) <= 1e-12);
    }
}

TEST_CASE("second-order self-convergence (2-D, small grid)") {
    const auto g = make_grid(2, 64, 4.0);
    AnalyticCoefficient a(1.0);
    a.add({CoefficientTerm::Kind::gaussian, 0.5, {0.3, 0.0, 0.0}, 1.0});
    const auto u0 = spectral::ComplexField::sample(g, [](const spectral::Point& x) {
        return 1.5 * std::exp(-(x[0] * x[0] + x[1] * x[1]) / 0.64);
    });
    std::vector<spectral::ComplexField> finals;
    for (double dt : {0.02, 0.01, 0.005}) finals.push_back(solve_from_past(u0, spec_for(g, a, 2.0, 0.5, dt)).final_state);
    const double r = std::sqrt(spectral::mass(finals[0] - finals[1]) / spectral::mass(finals[1] - finals[2]));
    CHECK(r >= 3.5);
    CHECK(r <= 4.5);
}

TEST_CASE("free dynamics") {
    const auto g = make_grid(3, 32, 5.0);
    const auto u = gaussian::probe_field(gaussian::make_probe(0.4, {0, 0, 0}, 3), g);
    auto s = spec_for(g, AnalyticCoefficient(0.0), 2.0, 0.5, 0.01);
    s.snapshot_stride = 10;
    s.record_duhamel = true;
    const auto traj = solve_from_past(u, s);
    for (const auto& [t, v] : traj.snapshots) CHECK(rel_l2(v, spectral::free_propagate(u, t)) <= 1e-10);
    CHECK(traj.diagnostics.duhamel_residual <= 1e-10);
    CHECK(duhamel_residual(traj.snapshots, s) <= 1e-10);

    // backward stepping recovers u(-T)
    auto v = traj.final_state;
    std::vector<double> a(g.size(), 0.0);
    for (long k = 0; k < step_count(s); ++k) strang_step_inplace(v, -s.dt, a, 2.0);
    CHECK(rel_l2(v, traj.initial_state) <= 1e-10);

    const auto rec = scattering_map(u, s);
    CHECK(rel_l2(rec.u_plus, u) <= 1e-10);
    CHECK(std::abs(rec.pairing) <= 1e-10 * spectral::mass(u));
    CHECK(rec.accepted);
    CHECK(born_pairing(u, s) == std::complex<double>(0.0, 0.0));
    CHECK(rel_l2(born_final_state(u, s), u) == 0.0);
}

TEST_CASE("nonlinear reversibility") {
    const auto g = make_grid(2, 32, 5.0);
    const auto u = gaussian::probe_field(gaussian::make_probe(0.4, {0, 0, 0}, 2), g);
    auto s = spec_for(g, AnalyticCoefficient(2.0), 3.0, 0.2, 0.01);
    const auto traj = solve_from_past(u, s);
    auto v = traj.final_state;
    for (long k = 0; k < step_count(s); ++k) strang_step_inplace(v, -s.dt, s.coeff.values(), s.p);
    CHECK(rel_l2(v, traj.initial_state) <= 1e-10);
}

TEST_CASE("gates and sentinels") {
    const auto g = make_grid(3, 32, 6.0);
    const auto u = gaussian::probe_field(gaussian::make_probe(0.5, {0, 0, 0}, 3), g);
    auto s = spec_for(g, AnalyticCoefficient(1.0), 2.0, 0.1, 0.01);
    s.smallness_h1 = 0.5;
    CHECK_THROWS_AS(solve_from_past(u, s), SmallnessViolation);
    s.smallness_h1 = 10.0;
    s.tail_gate = true;
    s.T = 2.0;
    CHECK_THROWS_AS(solve_from_past(u, s), TailCheckFailure);
    s.tail_gate = false;
    const auto traj = solve_from_past(u, s);
    CHECK_FALSE(traj.diagnostics.tail_ok);
    CHECK(traj.diagnostics.tail_minus > s.tail_tolerance);

    // Supercritical-mass focusing data in 2-D (p = 2) collapses.
    const auto g2 = make_grid(2, 128, 4.0);
    const auto big = spectral::ComplexField::sample(g2, [](const spectral::Point& x) {
        return 3.0 * std::exp(-(x[0] * x[0] + x[1] * x[1]));
    });
    auto f = spec_for(g2, AnalyticCoefficient(-4.0), 2.0, 0.5, 0.0005);
    f.smallness_h1 = 1e6;
    CHECK_THROWS_AS(solve_from_past(spectral::free_propagate(big, 0.5), f), BlowUpDetected);
}

TEST_CASE("mass conservation over a long solve (sigma = 0.4, T = 12, L = 10, n = 64)") {
    const auto g = make_grid(3, 64, 10.0);
    const auto u = gaussian::probe_field(gaussian::make_probe(0.4, {0, 0, 0}, 3), g);
    const auto traj = solve_from_past(u, spec_for(g, AnalyticCoefficient(1.0), 2.0, 12.0, 0.01));
    CHECK(traj.diagnostics.mass_drift <= 1e-8);
}

TEST_CASE("scattering pairing: sign, size and gauge covariance") {
    const double sigma = 0.3;
    auto sc = scaled(sigma, AnalyticCoefficient(1.0), 2.0);
    const auto rec = scattering_map(sc.probe, sc.spec);
    CHECK(rec.accepted);
    CHECK(rec.pairing.imag() < 0.0);
    const double main = std::pow(sigma, 5) * special::lambda_const(3, 2.0).value;
    CHECK(std::abs(-rec.pairing.imag() / main - 1.0) <= 0.2);
    CHECK(rec.diagnostics.solve.mass_drift <= 1e-8);

    const std::complex<double> phase = std::polar(1.0, 0.7);
    auto rotated = sc.probe;
    rotated *= phase;
    const auto rec2 = scattering_map(rotated, sc.spec);
    auto expect = rec.u_plus;
    expect *= phase;
    CHECK(rel_l2(rec2.u_plus, expect) <= 1e-12);
    CHECK(std::abs(rec2.pairing) == doctest::Approx(std::abs(rec.pairing)).epsilon(1e-12));

    // conjugate-reversed experiment: u- -> conj(u-), a -> -a gives conj(pairing)... for
    // the real probe the time-reversed problem with the same a returns conj(u+)
    // started from conj(u+); pairing of that experiment is the conjugate.
    auto back = rec.u_plus;
    for (auto& z : back.values()) z = std::conj(z);
    const auto rec3 = scattering_map(back, sc.spec);
    auto target = sc.probe;
    CHECK(rel_l2(rec3.u_plus, target) <= 1e-10);
}

TEST_CASE("Born approximation") {
    const double sigma = 0.3;
    auto sc = scaled(sigma, AnalyticCoefficient(1.0), 2.0);
    const auto bp = born_pairing(sc.probe, sc.spec);
    const auto bs = born_final_state(sc.probe, sc.spec);
    const auto direct = spectral::inner_product(bs - sc.probe, sc.probe);
    CHECK(std::abs(direct - bp) <= 1e-10 * std::abs(bp));
    // main term -i sigma^5 lambda within the approximate-identity / torus budget
    const double main = std::pow(sigma, 5) * special::lambda_const(3, 2.0).value;
    CHECK(std::abs(bp.real()) <= 1e-12 * main);
    CHECK(std::abs(-bp.imag() / main - 1.0) <= 0.03);
}

TEST_CASE("time-tail truncation") {
    // Analytic: the truncated kernel integral at T = 8 and 16 for sigma = 0.3.
    const double sigma = 0.3, s2 = sigma * sigma;
    auto truncated = [&](double T) {
        const double tau = T / s2;
        auto f = [](double t) { return std::pow(1.0 + t * t, -1.5); };  // d = 3, p = 2 time profile
        return special::integrate(f, 0.0, tau, {0.0, 1e-13, 500}).value;
    };
    CHECK(std::abs(truncated(16.0) / truncated(8.0) - 1.0) <= 0.01);

    // Solver: in 3-D the dispersed wave wraps around any affordable box long
    // before t = 8, so the horizon study runs in 1-D (p = 4, time profile
    // (1+t^2)^{-1}) on a box wide enough that nothing wraps by t = 128 sigma^2.
    const double sg = 0.25;
    const auto g1 = make_grid(1, 4096, 1024.0 * sg);
    const auto u1 = gaussian::probe_field(gaussian::make_probe(sg, {0, 0, 0}, 1), g1);
    auto s1 = spec_for(g1, AnalyticCoefficient(1.0), 4.0, 128.0 * sg * sg, 0.05 * sg * sg);
    const auto q128 = scattering_map(u1, s1).pairing;
    s1.T = 64.0 * sg * sg;
    const auto q64 = scattering_map(u1, s1).pairing;
    CHECK(std::abs(q128 - q64) / std::abs(q128) <= 0.01);
}

TEST_CASE("Duhamel residual decreases at second order") {
    const auto g = make_grid(2, 64, 4.0);
    AnalyticCoefficient a(1.0);
    const auto u0 = spectral::ComplexField::sample(g, [](const spectral::Point& x) {
        return 1.2 * std::exp(-(x[0] * x[0] + x[1] * x[1]) / 0.5);
    });
    double prev = 0.0;
    for (double dt : {0.01, 0.005}) {
        auto s = spec_for(g, a, 2.0, 0.25, dt);
        s.record_duhamel = true;
        const double r = solve_from_past(u0, s).diagnostics.duhamel_residual;
        if (prev > 0.0) CHECK(prev / r == doctest::Approx(4.0).epsilon(0.15));
        prev = r;
    }
    // stride changes only the quadrature of the stored snapshots
    auto s = spec_for(g, a, 2.0, 0.25, 0.005);
    s.snapshot_stride = 1;
    const auto t1 = solve_from_past(u0, s);
    s.snapshot_stride = 2;
    const auto t2 = solve_from_past(u0, s);
    const double r1 = duhamel_residual(t1.snapshots, s), r2 = duhamel_residual(t2.snapshots, s);
    CHECK(r2 == doctest::Approx(r1).epsilon(4.5));  // trapezoid error grows ~4x with the spacing
    CHECK(r1 <= 1e-3);
}

TEST_CASE("Strichartz ratios") {
    for (double p : {2.0, 4.0 / 3.0}) {
        auto s1 = scaled(0.4, AnalyticCoefficient(0.0), p);
        s1.spec.record_strichartz = true;
        s1.spec.strichartz_stride = 8;
        auto s2 = scaled(0.2, AnalyticCoefficient(0.0), p);
        s2.spec.record_strichartz = true;
        s2.spec.strichartz_stride = 8;
        const auto r1 = scattering_map(s1.probe, s1.spec).diagnostics.strichartz.value();
        const auto r2 = scattering_map(s2.probe, s2.spec).diagnostics.strichartz.value();
        CHECK(std::isfinite(r1.lebesgue));
        CHECK(r1.lebesgue == doctest::Approx(r2.lebesgue).epsilon(0.05));
        if (p == 4.0 / 3.0) CHECK(r1.critical == doctest::Approx(r1.lebesgue).epsilon(1e-12));
    }
}
