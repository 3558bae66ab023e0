#include "scatrec/inverse/oracle.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace scatrec::inverse {

GridPolicy GridPolicy::for_dim(int dim) {
    GridPolicy g;
    if (dim == 1) {
        g.width_factor = 512.0;
        g.points = 2048;
        g.horizon_factor = 64.0;
    } else if (dim == 2) {
        g.width_factor = 32.0;
        g.points = 128;
        g.horizon_factor = 32.0;
    }
    return g;
}

void validate(const GridPolicy& policy) {
    if (!(policy.width_factor > 0.0)) throw std::invalid_argument("GridPolicy: width_factor must be > 0");
    if (policy.points < 8 || policy.points % 2 != 0)
        throw std::invalid_argument("GridPolicy: points must be even and >= 8");
    if (!(policy.horizon_factor > 0.0)) throw std::invalid_argument("GridPolicy: horizon_factor must be > 0");
    if (!(policy.step_factor > 0.0)) throw std::invalid_argument("GridPolicy: step_factor must be > 0");
    const double steps = 2.0 * policy.horizon_factor / policy.step_factor;
    if (std::abs(steps - std::round(steps)) > 1e-9 * steps)
        throw std::invalid_argument("GridPolicy: step_factor must divide 2 * horizon_factor");
}

ScatteringOracle::ScatteringOracle(int dim, AnalyticCoefficient a, double p, GridPolicy policy,
                                   nls::ScatteringOptions options)
    : dim_(dim), a_(std::move(a)), p_(p), policy_(policy), options_(options) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("ScatteringOracle: dim must be 1, 2 or 3");
    validate(policy_);
}

spectral::SpectralGrid ScatteringOracle::grid_for(double sigma) const {
    return spectral::make_grid(dim_, policy_.points, policy_.width_factor * sigma);
}

nls::SolveSpec ScatteringOracle::spec_for(double sigma, const Point& center) const {
    Point shift{0.0, 0.0, 0.0};
    for (int k = 0; k < dim_; ++k) shift[k] = -center[k];
    nls::SolveSpec s;
    s.p = p_;
    s.coeff = nls::CoefficientProfile::from_analytic(grid_for(sigma), a_.translated(shift));
    const double s2 = sigma * sigma;
    s.T = policy_.horizon_factor * s2;
    // Exact step count keeps 2T/dt integral under rounding.
    const long steps = std::lround(2.0 * policy_.horizon_factor / policy_.step_factor);
    s.dt = 2.0 * s.T / static_cast<double>(steps);
    return s;
}

ScatteringRecord ScatteringOracle::apply(const GaussianProbe& probe) const {
    if (probe.dim != dim_) throw std::invalid_argument("ScatteringOracle::apply: dimension mismatch");
    const auto grid = grid_for(probe.sigma);
    const auto local = gaussian::make_probe(probe.sigma, {0.0, 0.0, 0.0}, dim_);
    ScatteringRecord rec = nls::scattering_map(gaussian::probe_field(local, grid),
                                               spec_for(probe.sigma, probe.center), options_);
    rec.probe = probe;
    return rec;
}

std::vector<std::string> family_violations(const ProbeFamily& family) {
    std::vector<std::string> out;
    if (family.dim < 1 || family.dim > 3) out.push_back("dim must be 1, 2 or 3");
    if (family.sigmas.empty()) out.push_back("no sigmas");
    if (family.centers.empty()) out.push_back("no centers");
    if (!out.empty()) return out;
    for (double s : family.sigmas) {
        if (!(s > 0.0) || !std::isfinite(s)) {
            out.push_back("sigma " + std::to_string(s) + " is not positive");
            continue;
        }
        const double h1 = gaussian::probe_h1_norm(gaussian::make_probe(s, {0, 0, 0}, family.dim));
        if (h1 > family.smallness_h1) {
            std::ostringstream m;
            m << "sigma " << s << ": ||phi||_H1 = " << h1 << " exceeds the smallness threshold "
              << family.smallness_h1;
            out.push_back(m.str());
        }
        for (std::size_t c = 0; c < family.centers.size(); ++c) {
            for (int k = 0; k < family.dim; ++k) {
                if (std::abs(family.centers[c][k]) > family.trusted_half_width - 4.0 * s) {
                    std::ostringstream m;
                    m << "sigma " << s << ": center #" << c << " is closer than 4 sigma to the trusted boundary";
                    out.push_back(m.str());
                    break;
                }
            }
        }
    }
    return out;
}

std::vector<FamilyMember> family_members(const ProbeFamily& family) {
    const auto bad = family_violations(family);
    if (!bad.empty()) {
        std::string msg = "probe family:";
        for (const auto& b : bad) msg += " " + b + ";";
        msg.pop_back();
        throw std::invalid_argument(msg);
    }
    std::vector<FamilyMember> out;
    for (double s : family.sigmas) {
        for (const auto& c : family.centers) {
            FamilyMember m;
            m.probe = gaussian::make_probe(s, c, family.dim);
            m.h1_norm = gaussian::probe_h1_norm(m.probe);
            // The Gaussian has infinite H^-1 dot norm when d <= 2.
            m.hm1_norm = family.dim == 3 ? gaussian::probe_sobolev_norm(m.probe, -1.0, true)
                                         : std::numeric_limits<double>::infinity();
            out.push_back(m);
        }
    }
    return out;
}

}  // namespace scatrec::inverse
