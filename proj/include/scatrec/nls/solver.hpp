#pragma once

#include "scatrec/nls/coefficient.hpp"
#include "scatrec/spectral/field.hpp"

#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

namespace scatrec::nls {

using spectral::ComplexField;

// (i d_t + Delta) u = a(x) |u|^p u on the window [-T, T].
struct SolveSpec {
    double p = 2.0;
    CoefficientProfile coeff;  // must live on the solve grid
    double T = 1.0;
    double dt = 0.01;          // 2T/dt must be an integer
    int snapshot_stride = 0;   // keep every k-th state (0: none)
    bool record_strichartz = false;
    int strichartz_stride = 1;
    bool record_duhamel = false;  // streaming Duhamel residual (two extra FFTs per step)

    // Gates and monitors.
    double smallness_h1 = 10.0;   // ||u_-||_{H^1} must not exceed this
    double tail_tolerance = 1e-8; // mass fraction outside the centred half box
    bool tail_gate = false;       // throw TailCheckFailure instead of recording
    double blowup_factor = 10.0;  // sup |u(t)| <= factor * sup-norm reference
};

// Throws std::invalid_argument listing the first inconsistency.
void validate(const SolveSpec& spec, const spectral::SpectralGrid& grid);
long step_count(const SolveSpec& spec);

// One Strang step: half kick, e^{i dt Delta}, half kick. dt may be negative.
// `a` holds the coefficient samples on the field's grid.
void strang_step_inplace(ComplexField& u, double dt, const std::vector<double>& a, double p);
ComplexField strang_step(ComplexField u, double dt, const CoefficientProfile& coeff, double p);

// Per-time spatial norms for the Strichartz monitors, with (q, r, s_c) of
// the problem's admissible pair.
struct StrichartzProfile {
    double q = 0.0, r = 0.0, s_c = 0.0;
    std::vector<double> times;
    std::vector<double> u_norm;     // ||u(t)||_{L^r}
    std::vector<double> grad_norm;  // || |grad u|(t) ||_{L^r}
    std::vector<double> frac_norm;  // || |grad|^{s_c} u(t) ||_{L^r}
};

struct StrichartzRatios {
    double lebesgue = 0.0;  // ||u||_{L^q L^r} / ||u_-||_{L^2}
    double gradient = 0.0;  // ||grad u||_{L^q L^r} / ||u_-||_{H^1}
    double critical = 0.0;  // || |grad|^{s_c} u ||_{L^q L^r} / ||u_-||_{H^{s_c} dot}
};

struct SolveDiagnostics {
    long steps = 0;
    double mass_initial = 0.0;
    double mass_final = 0.0;
    double mass_drift = 0.0;        // max over steps of |M(t)/M(-T) - 1|
    double tail_minus = 0.0;        // mass fraction outside the half box at -T
    double tail_plus = 0.0;         // same at +T
    bool tail_ok = true;
    double max_amplitude = 0.0;     // max over steps of sup |u|
    double u_minus_h1 = 0.0;
    double duhamel_residual = std::numeric_limits<double>::quiet_NaN();
};

struct Trajectory {
    std::vector<std::pair<double, ComplexField>> snapshots;
    ComplexField initial_state;  // u(-T)
    ComplexField final_state;    // u(T)
    // u at the step closest to T/2 and its time (for the horizon certificate).
    ComplexField half_horizon_state;
    double half_horizon_time = 0.0;
    SolveDiagnostics diagnostics;
    std::optional<StrichartzProfile> strichartz;
};

// Called with (step index, t, u(t)) every `stride` steps and at the end.
struct SolveObserver {
    int stride = 1;
    std::function<void(long, double, const ComplexField&)> on_state;
};

// u(-T) = e^{-iT Delta} u_-, then Strang steps to +T.
// Throws SmallnessViolation, TailCheckFailure (only with tail_gate) or
// BlowUpDetected.
Trajectory solve_from_past(const ComplexField& u_minus, const SolveSpec& spec,
                           const SolveObserver* observer = nullptr);

// Post-processing on stored snapshots.
double duhamel_residual(const std::vector<std::pair<double, ComplexField>>& snapshots,
                        const SolveSpec& spec);
StrichartzProfile strichartz_profile(const std::vector<std::pair<double, ComplexField>>& snapshots,
                                     double p);
StrichartzRatios strichartz_ratio(const StrichartzProfile& profile, const ComplexField& u_minus);
StrichartzRatios strichartz_ratio(const std::vector<std::pair<double, ComplexField>>& snapshots,
                                  const ComplexField& u_minus, double p);
// Profile of the free evolution e^{it Delta} u_- sampled at the same times a
// solve with this spec would use.
StrichartzProfile free_strichartz_profile(const ComplexField& u_minus, const SolveSpec& spec);

// Mass fraction outside the ball of radius L/2 about the centre of mass
// (periodic distance).
double tail_fraction(const ComplexField& u);

}  // namespace scatrec::nls
