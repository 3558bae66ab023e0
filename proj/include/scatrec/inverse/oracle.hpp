#pragma once

#include "scatrec/gaussian/probe.hpp"
#include "scatrec/nls/coefficient.hpp"
#include "scatrec/nls/scattering.hpp"

#include <limits>
#include <string>
#include <vector>

namespace scatrec::inverse {

using gaussian::GaussianProbe;
using nls::AnalyticCoefficient;
using nls::ScatteringRecord;
using spectral::Point;

// Probe-relative discretization: a box of half width width_factor * sigma with
// `points` nodes per axis, horizon T = horizon_factor * sigma^2 and step
// dt = step_factor * sigma^2. Every quantity scales with the probe, so the
// discretization error is the same at every sigma.
struct GridPolicy {
    double width_factor = 16.0;
    int points = 64;
    double horizon_factor = 16.0;
    double step_factor = 0.05;

    // 3-D: 64^3 nodes, h = sigma/2. 1-D: 2048 nodes on a box wide enough that
    // the dispersed probe does not wrap before T = 64 sigma^2.
    static GridPolicy for_dim(int dim);
};

// Throws std::invalid_argument naming the offending field.
void validate(const GridPolicy& policy);

// The scattering map S_a for probes phi_{sigma,x0}. Each evaluation solves on
// a box centred at x0 (the coefficient is translated by -x0), so every probe
// sees the same discretization. Immutable after construction and safe to
// share between threads.
class ScatteringOracle {
public:
    ScatteringOracle(int dim, AnalyticCoefficient a, double p, GridPolicy policy,
                     nls::ScatteringOptions options = {});
    ScatteringOracle(int dim, AnalyticCoefficient a, double p)
        : ScatteringOracle(dim, std::move(a), p, GridPolicy::for_dim(dim)) {}

    int dim() const { return dim_; }
    double power() const { return p_; }
    const AnalyticCoefficient& coefficient() const { return a_; }
    const GridPolicy& policy() const { return policy_; }
    const nls::ScatteringOptions& options() const { return options_; }

    spectral::SpectralGrid grid_for(double sigma) const;
    // Solve spec for a probe of width sigma centred at x0 (grid_for(sigma)).
    nls::SolveSpec spec_for(double sigma, const Point& center) const;

    // Record with u_- = phi on grid_for(sigma) (probe-centred coordinates).
    // Solver errors propagate.
    ScatteringRecord apply(const GaussianProbe& probe) const;

private:
    int dim_;
    AnalyticCoefficient a_;
    double p_;
    GridPolicy policy_;
    nls::ScatteringOptions options_;
};

// Gaussian probes with their continuum normalizations.
struct ProbeFamily {
    int dim = 3;
    std::vector<double> sigmas;
    std::vector<Point> centers;
    // Region where the coefficient is trusted; centres must stay 4 sigma
    // inside it along every axis.
    double trusted_half_width = std::numeric_limits<double>::infinity();
    double smallness_h1 = 10.0;
};

struct FamilyMember {
    GaussianProbe probe;
    double h1_norm;   // ||phi||_{H^1}
    double hm1_norm;  // ||phi||_{H^-1 dot}, closed form (infinite for d <= 2)
};

// Every violation, one per entry (empty when the family is usable).
std::vector<std::string> family_violations(const ProbeFamily& family);
// sigma-major, then centres in input order. Throws std::invalid_argument with
// all violations joined.
std::vector<FamilyMember> family_members(const ProbeFamily& family);

}  // namespace scatrec::inverse
