#include "scatrec/nls/solver.hpp"

#include "scatrec/errors.hpp"
#include "scatrec/simd/kernels.hpp"
#include "scatrec/special/lambda.hpp"
#include "scatrec/spectral/fft.hpp"
#include "scatrec/spectral/norms.hpp"
#include "scatrec/spectral/operators.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace scatrec::nls {
namespace {

using spectral::cplx;
using spectral::Space;

// (q, r, s_c) for the monitors: the admissible pair of the 3-D theory, or the
// same formulas outside it for low-dimensional studies.
void strichartz_exponents(double p, double& q, double& r, double& s_c) {
    q = p + 2.0;
    r = 6.0 * (p + 2.0) / (3.0 * (p + 2.0) - 4.0);
    s_c = std::max(0.0, 1.5 - 2.0 / p);
}

void check_finite(const ComplexField& u, double t) {
    const double m = simd::sum_abs2(u.values());
    if (!std::isfinite(m)) {
        std::ostringstream os;
        os << "solver: non-finite state at t = " << t;
        throw BlowUpDetected(os.str());
    }
}

}  // namespace

long step_count(const SolveSpec& spec) { return std::lround(2.0 * spec.T / spec.dt); }

void validate(const SolveSpec& spec, const spectral::SpectralGrid& grid) {
    std::ostringstream err;
    if (!(spec.dt > 0.0) || !std::isfinite(spec.dt)) err << "dt must be > 0; ";
    if (!(spec.T > 0.0) || !std::isfinite(spec.T)) err << "T must be > 0; ";
    if (spec.dt > 0.0 && spec.T > 0.0) {
        const double steps = 2.0 * spec.T / spec.dt;
        if (std::abs(steps - std::round(steps)) > 1e-9 * steps) err << "T and dt: 2T/dt must be an integer; ";
    }
    if (grid.dim() == 3) {
        if (!(spec.p >= special::kPowerMin - 1e-12 && spec.p <= special::kPowerMax + 1e-12))
            err << "p must lie in [4/3, 4] in three dimensions; ";
    } else if (!(spec.p > 2.0 / grid.dim())) {
        err << "p must exceed 2/d; ";
    }
    if (!(spec.coeff.grid() == grid)) err << "coefficient grid differs from the field grid; ";
    if (spec.snapshot_stride < 0) err << "snapshot_stride must be >= 0; ";
    if (spec.strichartz_stride < 1) err << "strichartz_stride must be >= 1; ";
    if (!(spec.blowup_factor > 1.0)) err << "blowup_factor must be > 1; ";
    if (!(spec.smallness_h1 > 0.0)) err << "smallness_h1 must be > 0; ";
    const auto msg = err.str();
    if (!msg.empty()) throw std::invalid_argument("SolveSpec: " + msg.substr(0, msg.size() - 2));
}

void strang_step_inplace(ComplexField& u, double dt, const std::vector<double>& a, double p) {
    spectral::require_space(u, Space::physical, "strang_step");
    simd::nonlinear_kick(u.values(), a, 0.5 * dt, p);
    spectral::free_propagate_inplace(u, dt);
    simd::nonlinear_kick(u.values(), a, 0.5 * dt, p);
}

ComplexField strang_step(ComplexField u, double dt, const CoefficientProfile& coeff, double p) {
    if (!(coeff.grid() == u.grid())) throw std::invalid_argument("strang_step: coefficient grid mismatch");
    strang_step_inplace(u, dt, coeff.values(), p);
    return u;
}

double tail_fraction(const ComplexField& u) {
    spectral::require_space(u, Space::physical, "tail_fraction");
    const auto& g = u.grid();
    const int d = g.dim();
    const double L = g.half_width();
    // circular centre of mass per axis
    double centre[3] = {0.0, 0.0, 0.0};
    for (int a = 0; a < d; ++a) {
        cplx acc = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            const double x = g.point(i)[a];
            acc += std::norm(u[i]) * std::exp(cplx(0.0, std::numbers::pi * x / L));
        }
        centre[a] = std::abs(acc) > 0.0 ? std::arg(acc) * L / std::numbers::pi : 0.0;
    }
    double total = 0.0, outside = 0.0;
    const double R2 = 0.25 * L * L;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const auto x = g.point(i);
        double r2 = 0.0;
        for (int a = 0; a < d; ++a) {
            double dx = std::abs(x[a] - centre[a]);
            dx = std::min(dx, 2.0 * L - dx);
            r2 += dx * dx;
        }
        const double m = std::norm(u[i]);
        total += m;
        if (r2 > R2) outside += m;
    }
    return total > 0.0 ? outside / total : 0.0;
}

namespace {

struct SpatialNorms {
    double u, grad, frac;
};

SpatialNorms monitor_norms(const ComplexField& u, double r, double s_c) {
    SpatialNorms n;
    n.u = spectral::lebesgue_norm(u, r);
    n.grad = spectral::lebesgue_norm(spectral::gradient_modulus(u), r);
    n.frac = s_c == 0.0 ? n.u : spectral::lebesgue_norm(spectral::fractional_derivative(u, s_c), r);
    return n;
}

void push(StrichartzProfile& prof, double t, const SpatialNorms& n) {
    prof.times.push_back(t);
    prof.u_norm.push_back(n.u);
    prof.grad_norm.push_back(n.grad);
    prof.frac_norm.push_back(n.frac);
}

// Streaming residual of the Duhamel formula in the interaction picture,
//   w(t) = e^{-it Delta} u(t),  R(t) = w(t) - w(-T) + i int_{-T}^t e^{-is Delta} N(u(s)) ds,
// with the time integral by the trapezoid rule on the step nodes.
class DuhamelMonitor {
public:
    DuhamelMonitor(const ComplexField& u0, double t0, const std::vector<double>& a, double p)
        : a_(a), p_(p) {
        w0_ = interaction(u0, t0);
        n_prev_ = nonlinear(u0, t0);
        integral_ = ComplexField(u0.grid(), Space::spectral);
        t_prev_ = t0;
    }

    void observe(const ComplexField& u, double t) {
        ComplexField n = nonlinear(u, t);
        const double h = t - t_prev_;
        simd::axpy(integral_.values(), cplx(0.5 * h, 0.0), n_prev_.values());
        simd::axpy(integral_.values(), cplx(0.5 * h, 0.0), n.values());
        n_prev_ = std::move(n);
        t_prev_ = t;

        ComplexField r = interaction(u, t);
        const double wn = simd::sum_abs2(r.values());
        simd::axpy(r.values(), cplx(-1.0, 0.0), w0_.values());
        simd::axpy(r.values(), cplx(0.0, 1.0), integral_.values());
        const double rel = std::sqrt(simd::sum_abs2(r.values()) / wn);
        worst_ = std::max(worst_, rel);
    }

    double worst() const { return worst_; }

private:
    ComplexField interaction(const ComplexField& u, double t) const {
        ComplexField s = spectral::to_spectral(u);
        spectral::propagate_spectral(s, -t);
        return s;
    }
    ComplexField nonlinear(const ComplexField& u, double t) const {
        ComplexField n(u.grid(), Space::physical);
        simd::nonlinearity(n.values(), u.values(), a_, p_);
        spectral::to_spectral_inplace(n);
        spectral::propagate_spectral(n, -t);
        return n;
    }

    const std::vector<double>& a_;
    double p_;
    ComplexField w0_, n_prev_, integral_;
    double t_prev_ = 0.0;
    double worst_ = 0.0;
};

}  // namespace

Trajectory solve_from_past(const ComplexField& u_minus, const SolveSpec& spec,
                           const SolveObserver* observer) {
    spectral::require_space(u_minus, Space::physical, "solve_from_past");
    validate(spec, u_minus.grid());

    Trajectory out;
    auto& diag = out.diagnostics;
    diag.u_minus_h1 = spectral::sobolev_norm(u_minus, 1.0, false);
    if (diag.u_minus_h1 > spec.smallness_h1) {
        std::ostringstream os;
        os << "solve_from_past: ||u_-||_{H^1} = " << diag.u_minus_h1 << " exceeds the smallness threshold "
           << spec.smallness_h1;
        throw SmallnessViolation(os.str());
    }

    const long N = step_count(spec);
    const double dt = spec.dt, T = spec.T;
    const auto& a = spec.coeff.values();
    const bool nonlinear = !spec.coeff.is_zero();

    ComplexField u = spectral::free_propagate(u_minus, -T);
    out.initial_state = u;
    diag.steps = N;
    diag.mass_initial = spectral::mass(u);
    diag.tail_minus = tail_fraction(u);
    if (spec.tail_gate && diag.tail_minus > spec.tail_tolerance) {
        std::ostringstream os;
        os << "solve_from_past: mass fraction " << diag.tail_minus << " outside the half box at t = -T exceeds "
           << spec.tail_tolerance;
        throw TailCheckFailure(os.str());
    }
    // sup |e^{it Delta} u_-| <= (1/N) sum |F_k| for every t, so growth beyond
    // this reference is caused by the nonlinearity.
    double sup_ref = 0.0;
    {
        const ComplexField s = spectral::to_spectral(u_minus);
        for (const auto& z : s.values()) sup_ref += std::abs(z);
        sup_ref /= static_cast<double>(s.size());
    }
    diag.max_amplitude = simd::max_abs(u.values());

    double q = 0, r = 0, s_c = 0;
    strichartz_exponents(spec.p, q, r, s_c);
    if (spec.record_strichartz) {
        out.strichartz.emplace();
        out.strichartz->q = q;
        out.strichartz->r = r;
        out.strichartz->s_c = s_c;
        push(*out.strichartz, -T, monitor_norms(u, r, s_c));
    }
    std::optional<DuhamelMonitor> duhamel;
    if (spec.record_duhamel) duhamel.emplace(u, -T, a, spec.p);
    if (spec.snapshot_stride > 0) out.snapshots.emplace_back(-T, u);
    if (observer && observer->on_state) observer->on_state(0, -T, u);

    const long half_step = std::lround(0.75 * static_cast<double>(N));
    auto needs_state = [&](long k) {
        if (k == N || k == half_step) return true;
        if (spec.snapshot_stride > 0 && k % spec.snapshot_stride == 0) return true;
        if (spec.record_strichartz && k % spec.strichartz_stride == 0) return true;
        if (duhamel) return true;
        if (observer && observer->stride > 0 && k % observer->stride == 0) return true;
        return false;
    };

    // Adjacent half kicks act on the same |u| and compose exactly, so they
    // are merged unless the state is needed in between.
    bool pending = false;
    for (long k = 0; k < N; ++k) {
        if (nonlinear) simd::nonlinear_kick(u.values(), a, pending ? dt : 0.5 * dt, spec.p);
        spectral::free_propagate_inplace(u, dt);
        pending = nonlinear;
        const long step = k + 1;
        const double t = -T + static_cast<double>(step) * dt;

        const double m = spectral::mass(u);
        const double amp = simd::max_abs(u.values());
        if (!std::isfinite(m) || !std::isfinite(amp)) check_finite(u, t);
        diag.mass_drift = std::max(diag.mass_drift, std::abs(m / diag.mass_initial - 1.0));
        diag.max_amplitude = std::max(diag.max_amplitude, amp);
        if (amp > spec.blowup_factor * sup_ref) {
            std::ostringstream os;
            os << "solve_from_past: sup|u| = " << amp << " at t = " << t << " exceeds " << spec.blowup_factor
               << " x the free-evolution bound " << sup_ref;
            throw BlowUpDetected(os.str());
        }

        if (!needs_state(step)) continue;
        if (pending) {
            simd::nonlinear_kick(u.values(), a, 0.5 * dt, spec.p);
            pending = false;
        }
        if (step == half_step) {
            out.half_horizon_state = u;
            out.half_horizon_time = t;
        }
        if (spec.record_strichartz && (step % spec.strichartz_stride == 0 || step == N))
            push(*out.strichartz, t, monitor_norms(u, r, s_c));
        if (duhamel) duhamel->observe(u, t);
        if (spec.snapshot_stride > 0 && (step % spec.snapshot_stride == 0 || step == N))
            out.snapshots.emplace_back(t, u);
        if (observer && observer->on_state && ((observer->stride > 0 && step % observer->stride == 0) || step == N))
            observer->on_state(step, t, u);
    }

    diag.mass_final = spectral::mass(u);
    diag.tail_plus = tail_fraction(u);
    diag.tail_ok = diag.tail_minus <= spec.tail_tolerance && diag.tail_plus <= spec.tail_tolerance;
    if (duhamel) diag.duhamel_residual = duhamel->worst();
    out.final_state = std::move(u);
    return out;
}

double duhamel_residual(const std::vector<std::pair<double, ComplexField>>& snapshots, const SolveSpec& spec) {
    if (snapshots.size() < 2) throw std::invalid_argument("duhamel_residual: need at least 2 snapshots");
    const auto& a = spec.coeff.values();
    DuhamelMonitor mon(snapshots.front().second, snapshots.front().first, a, spec.p);
    for (std::size_t i = 1; i < snapshots.size(); ++i) {
        if (!(snapshots[i].first > snapshots[i - 1].first))
            throw std::invalid_argument("duhamel_residual: snapshot times must increase");
        mon.observe(snapshots[i].second, snapshots[i].first);
    }
    return mon.worst();
}

StrichartzProfile strichartz_profile(const std::vector<std::pair<double, ComplexField>>& snapshots, double p) {
    StrichartzProfile prof;
    strichartz_exponents(p, prof.q, prof.r, prof.s_c);
    for (const auto& [t, u] : snapshots) push(prof, t, monitor_norms(u, prof.r, prof.s_c));
    return prof;
}

StrichartzRatios strichartz_ratio(const StrichartzProfile& prof, const ComplexField& u_minus) {
    StrichartzRatios out;
    const double l2 = spectral::lebesgue_norm(u_minus, 2.0);
    const double h1 = spectral::sobolev_norm(u_minus, 1.0, false);
    const double hs = prof.s_c == 0.0 ? l2 : spectral::sobolev_norm(u_minus, prof.s_c, true);
    out.lebesgue = spectral::spacetime_norm_from_profile(prof.times, prof.u_norm, prof.q) / l2;
    out.gradient = spectral::spacetime_norm_from_profile(prof.times, prof.grad_norm, prof.q) / h1;
    out.critical = spectral::spacetime_norm_from_profile(prof.times, prof.frac_norm, prof.q) / hs;
    return out;
}

StrichartzRatios strichartz_ratio(const std::vector<std::pair<double, ComplexField>>& snapshots,
                                  const ComplexField& u_minus, double p) {
    return strichartz_ratio(strichartz_profile(snapshots, p), u_minus);
}

StrichartzProfile free_strichartz_profile(const ComplexField& u_minus, const SolveSpec& spec) {
    validate(spec, u_minus.grid());
    StrichartzProfile prof;
    strichartz_exponents(spec.p, prof.q, prof.r, prof.s_c);
    const long N = step_count(spec);
    ComplexField s = spectral::to_spectral(u_minus);
    for (long k = 0; k <= N; ++k) {
        if (k % spec.strichartz_stride != 0 && k != N) continue;
        const double t = -spec.T + static_cast<double>(k) * spec.dt;
        ComplexField v = s;
        spectral::propagate_spectral(v, t);
        spectral::from_spectral_inplace(v);
        push(prof, t, monitor_norms(v, prof.r, prof.s_c));
    }
    return prof;
}

}  // namespace scatrec::nls
