#include "scatrec/nls/scattering.hpp"

#include "scatrec/simd/kernels.hpp"
#include "scatrec/spectral/norms.hpp"
#include "scatrec/spectral/operators.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace scatrec::nls {
namespace {

using spectral::cplx;

long born_nodes(const SolveSpec& spec, double dt_born, double& h) {
    h = dt_born > 0.0 ? dt_born : spec.dt;
    const double n = 2.0 * spec.T / h;
    if (std::abs(n - std::round(n)) > 1e-9 * n)
        throw std::invalid_argument("born: 2T must be a multiple of dt_born");
    return std::lround(n);
}

bool within(const StrichartzRatios& s, const StrichartzRatios& f, double factor) {
    return s.lebesgue <= factor * f.lebesgue && s.gradient <= factor * f.gradient &&
           s.critical <= factor * f.critical;
}

}  // namespace

ScatteringRecord scattering_map(const ComplexField& u_minus, const SolveSpec& spec,
                                const ScatteringOptions& opt) {
    ScatteringRecord rec;
    rec.u_minus = u_minus;
    Trajectory traj = solve_from_past(u_minus, spec);
    auto& diag = rec.diagnostics;
    diag.solve = traj.diagnostics;

    rec.u_plus = spectral::free_propagate(std::move(traj.final_state), -spec.T);
    rec.pairing = spectral::inner_product(rec.u_plus - u_minus, u_minus);

    const ComplexField u_half = spectral::free_propagate(traj.half_horizon_state, -traj.half_horizon_time);
    diag.certificate =
        spectral::sobolev_norm(rec.u_plus - u_half, 1.0, false) / spectral::sobolev_norm(rec.u_plus, 1.0, false);

    if (traj.strichartz) {
        diag.strichartz = strichartz_ratio(*traj.strichartz, u_minus);
        diag.strichartz_free = strichartz_ratio(free_strichartz_profile(u_minus, spec), u_minus);
    }

    std::ostringstream why;
    if (diag.solve.mass_drift > opt.mass_drift_tol) why << "mass drift " << diag.solve.mass_drift << "; ";
    if (!(diag.certificate <= opt.certificate_tol)) why << "horizon certificate " << diag.certificate << "; ";
    if (diag.strichartz && !within(*diag.strichartz, *diag.strichartz_free, opt.strichartz_factor))
        why << "Strichartz ratios exceed " << opt.strichartz_factor << "x the free ones; ";
    rec.rejection = why.str();
    if (!rec.rejection.empty()) rec.rejection.resize(rec.rejection.size() - 2);
    rec.accepted = rec.rejection.empty();
    return rec;
}

ComplexField born_final_state(const ComplexField& u_minus, const SolveSpec& spec, double dt_born) {
    validate(spec, u_minus.grid());
    double h = 0.0;
    const long n = born_nodes(spec, dt_born, h);
    const ComplexField s = spectral::to_spectral(u_minus);
    ComplexField acc(u_minus.grid(), spectral::Space::spectral);
    if (!spec.coeff.is_zero()) {
        ComplexField nl(u_minus.grid());
        for (long k = 0; k <= n; ++k) {
            const double t = -spec.T + static_cast<double>(k) * h;
            const double w = (k == 0 || k == n) ? 0.5 * h : h;
            ComplexField v = s;
            spectral::propagate_spectral(v, t);
            spectral::from_spectral_inplace(v);
            nl.set_space(spectral::Space::physical);
            simd::nonlinearity(nl.values(), v.values(), spec.coeff.values(), spec.p);
            spectral::to_spectral_inplace(nl);
            spectral::propagate_spectral(nl, -t);
            simd::axpy(acc.values(), cplx(0.0, -w), nl.values());
        }
    }
    ComplexField out = spectral::from_spectral(std::move(acc));
    out += u_minus;
    return out;
}

std::complex<double> born_pairing(const ComplexField& u_minus, const SolveSpec& spec, double dt_born) {
    validate(spec, u_minus.grid());
    if (spec.coeff.is_zero()) return {0.0, 0.0};
    double h = 0.0;
    const long n = born_nodes(spec, dt_born, h);
    const ComplexField s = spectral::to_spectral(u_minus);
    const double cell = u_minus.grid().cell_volume();
    double total = 0.0;
    for (long k = 0; k <= n; ++k) {
        const double t = -spec.T + static_cast<double>(k) * h;
        const double w = (k == 0 || k == n) ? 0.5 * h : h;
        ComplexField v = s;
        spectral::propagate_spectral(v, t);
        spectral::from_spectral_inplace(v);
        total += w * cell * simd::sum_weighted_abs_pow(v.values(), spec.coeff.values(), spec.p + 2.0);
    }
    return {0.0, -total};
}

}  // namespace scatrec::nls
