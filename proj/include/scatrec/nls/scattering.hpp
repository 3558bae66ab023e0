#pragma once

#include "scatrec/gaussian/probe.hpp"
#include "scatrec/nls/solver.hpp"

#include <optional>
#include <string>

namespace scatrec::nls {

struct ScatteringOptions {
    // Relative H^1 distance allowed between the final states extracted at
    // horizons T and ~T/2.
    double certificate_tol = 5e-3;
    // Accept only if the Strichartz ratios stay within this factor of the
    // free ones (needs record_strichartz).
    double strichartz_factor = 4.0;
    double mass_drift_tol = 1e-8;
};

struct ScatteringDiagnostics {
    SolveDiagnostics solve;
    double certificate = 0.0;  // ||u+(T) - u+(T/2)||_{H^1} / ||u+(T)||_{H^1}
    std::optional<StrichartzRatios> strichartz;
    std::optional<StrichartzRatios> strichartz_free;
};

struct ScatteringRecord {
    std::optional<gaussian::GaussianProbe> probe;
    ComplexField u_minus;
    ComplexField u_plus;
    std::complex<double> pairing;  // <u+ - u-, u->, discrete L^2, linear in the first slot
    ScatteringDiagnostics diagnostics;
    bool accepted = false;
    std::string rejection;  // empty when accepted
};

// u+ = e^{-iT Delta} u(T); the pairing and the acceptance checks as
// described in ScatteringOptions. Errors from solve_from_past propagate.
ScatteringRecord scattering_map(const ComplexField& u_minus, const SolveSpec& spec,
                                const ScatteringOptions& opt = {});

// First Born iterate:  u- - i int_{-T}^{T} e^{-it Delta} [a |v|^p v](t) dt,
// v = e^{it Delta} u-, trapezoid rule on the nodes -T + k dt_born.
// dt_born = 0 uses spec.dt.
ComplexField born_final_state(const ComplexField& u_minus, const SolveSpec& spec, double dt_born = 0.0);
// <born - u-, u-> computed directly as -i int int a |v|^{p+2} dx dt on the
// same nodes (one transform per node).
std::complex<double> born_pairing(const ComplexField& u_minus, const SolveSpec& spec, double dt_born = 0.0);

}  // namespace scatrec::nls
