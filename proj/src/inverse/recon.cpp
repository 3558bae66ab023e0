#include "scatrec/inverse/recon.hpp"

#include "scatrec/errors.hpp"
#include "scatrec/parallel.hpp"
#include "scatrec/special/lambda.hpp"
#include "scatrec/spectral/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace scatrec::inverse {
namespace {

bool same_discretization(const GridPolicy& a, const GridPolicy& b) {
    return a.width_factor == b.width_factor && a.points == b.points && a.horizon_factor == b.horizon_factor &&
           a.step_factor == b.step_factor;
}

}  // namespace

std::complex<double> pairing_functional(const ScatteringRecord& record) {
    if (!record.accepted) throw NonConvergence("scattering record rejected: " + record.rejection);
    return record.pairing;
}

double pairing_to_coefficient(std::complex<double> pairing, double sigma, int dim, double p) {
    const double lambda = special::lambda_const(dim, p).value;
    return -pairing.imag() / (std::pow(sigma, dim + 2) * lambda);
}

PointEstimate reconstruct_point(const ScatteringOracle& oracle, double sigma, const Point& x0) {
    const auto probe = gaussian::make_probe(sigma, x0, oracle.dim());
    const ScatteringRecord rec = oracle.apply(probe);
    PointEstimate e;
    e.center = probe.center;
    e.sigma = sigma;
    e.pairing = pairing_functional(rec);
    e.a_hat = pairing_to_coefficient(e.pairing, sigma, oracle.dim(), oracle.power());
    e.certificate = rec.diagnostics.certificate;
    e.mass_drift = rec.diagnostics.solve.mass_drift;
    e.ok = true;
    return e;
}

std::vector<PointEstimate> reconstruct_field(const ScatteringOracle& oracle, double sigma,
                                             const std::vector<Point>& centers, int workers) {
    return parallel_map(centers.size(), workers, [&](std::size_t i) {
        try {
            return reconstruct_point(oracle, sigma, centers[i]);
        } catch (const std::exception& ex) {
            PointEstimate e;
            e.center = centers[i];
            e.sigma = sigma;
            e.a_hat = std::numeric_limits<double>::quiet_NaN();
            e.error = ex.what();
            return e;
        }
    });
}

OperatorNormEstimate operator_norm_estimate(const ScatteringOracle& a, const ScatteringOracle& b,
                                            const ProbeFamily& family, int workers) {
    if (a.dim() != b.dim() || a.dim() != family.dim)
        throw std::invalid_argument("operator_norm_estimate: oracles and family differ in dimension");
    if (!same_discretization(a.policy(), b.policy()))
        throw std::invalid_argument("operator_norm_estimate: oracles use different grid policies");
    const auto members = family_members(family);

    struct Row {
        double ratio, bound;
        std::complex<double> dpair;
    };
    const auto rows = parallel_map(members.size(), workers, [&](std::size_t i) {
        const auto& m = members[i];
        const ScatteringRecord ra = a.apply(m.probe);
        const ScatteringRecord rb = b.apply(m.probe);
        const auto pa = pairing_functional(ra);
        const auto pb = pairing_functional(rb);
        const double diff = spectral::sobolev_norm(ra.u_plus - rb.u_plus, 1.0, false);
        const double phi = spectral::sobolev_norm(ra.u_minus, 1.0, false);
        return Row{diff / phi, diff * m.hm1_norm, pa - pb};
    });

    OperatorNormEstimate out;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.ratios.push_back(rows[i].ratio);
        out.pairing_bounds.push_back(rows[i].bound);
        out.pairing_diffs.push_back(rows[i].dpair);
        if (rows[i].ratio > out.value) {
            out.value = rows[i].ratio;
            out.argmax = i;
        }
    }
    return out;
}

SigmaChoice optimal_sigma(double op_norm, double w1inf_sum, double epsilon, double sigma_min) {
    if (!(op_norm >= 0.0)) throw std::invalid_argument("optimal_sigma: op_norm must be >= 0");
    if (!(w1inf_sum > 0.0)) throw std::invalid_argument("optimal_sigma: w1inf_sum must be > 0");
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw std::invalid_argument("optimal_sigma: epsilon must be in (0, 1]");
    SigmaChoice c;
    c.unclamped = epsilon * std::pow(op_norm / w1inf_sum, 4.0 / 9.0);
    c.clamped = c.unclamped < sigma_min;
    c.sigma = c.clamped ? sigma_min : c.unclamped;
    return c;
}

double stability_bound_rhs(double w1inf_a, double w1inf_b, double op_norm) {
    if (!(w1inf_a >= 0.0) || !(w1inf_b >= 0.0) || !(op_norm >= 0.0))
        throw std::invalid_argument("stability_bound_rhs: inputs must be nonnegative");
    const double m = w1inf_a + w1inf_b;
    return std::pow(m, 8.0 / 9.0) * std::pow(op_norm, 1.0 / 9.0) +
           std::pow(m, 10.0 / 9.0) * std::pow(op_norm, 8.0 / 9.0);
}

special::LambdaInverse power_from_lambda(double lambda_hat, double clamp_slack) {
    const double lo = special::lambda_const(3, special::kPowerMax).value;
    const double hi = special::lambda_const(3, special::kPowerMin).value;
    if (!std::isfinite(lambda_hat) || lambda_hat < (1.0 - clamp_slack) * lo ||
        lambda_hat > (1.0 + clamp_slack) * hi) {
        std::ostringstream m;
        m << "lambda_hat = " << lambda_hat << " is outside [" << lo << ", " << hi << "] by more than "
          << 100.0 * clamp_slack << "%";
        throw std::domain_error(m.str());
    }
    return special::invert_lambda(lambda_hat);
}

PowerEstimate estimate_power(const ScatteringOracle& oracle, double sigma, const PowerOptions& opt) {
    if (oracle.dim() != 3) throw std::invalid_argument("estimate_power: needs a 3-D oracle");
    const auto& a = oracle.coefficient();
    if (!a.is_constant() || a.constant() != 1.0)
        throw std::invalid_argument("estimate_power: needs the pure power map (a = 1)");

    auto lambda_at = [&](double s) {
        const auto rec = oracle.apply(gaussian::make_probe(s, {0.0, 0.0, 0.0}, 3));
        return -pairing_functional(rec).imag() / std::pow(s, 5);
    };

    PowerEstimate out;
    out.sigma = sigma;
    const double l1 = lambda_at(sigma);
    out.lambda_samples.emplace_back(sigma, l1);
    out.lambda_hat = l1;
    if (opt.richardson_sigma) {
        const double s2 = *opt.richardson_sigma;
        if (!(s2 > 0.0) || s2 == sigma) throw std::invalid_argument("estimate_power: bad Richardson sigma");
        const double l2 = lambda_at(s2);
        out.lambda_samples.emplace_back(s2, l2);
        const double w1 = std::pow(sigma, opt.richardson_exponent);
        const double w2 = std::pow(s2, opt.richardson_exponent);
        out.lambda_hat = (w2 * l1 - w1 * l2) / (w2 - w1);
    }

    const auto inv = power_from_lambda(out.lambda_hat, opt.clamp_slack);
    out.p_hat = inv.p;
    out.clamped = inv.clamped;
    return out;
}

StabilityReport stability_report(const ScatteringOracle& a, const ScatteringOracle& b, double sigma,
                                 const std::vector<Point>& centers, const ProbeFamily& family,
                                 int workers) {
    const auto fa = reconstruct_field(a, sigma, centers, workers);
    const auto fb = reconstruct_field(b, sigma, centers, workers);
    StabilityReport r;
    r.sigma_used = sigma;
    for (std::size_t i = 0; i < centers.size(); ++i) {
        if (!fa[i].ok || !fb[i].ok)
            throw NonConvergence("stability_report: reconstruction failed at centre #" + std::to_string(i) + ": " +
                                 (fa[i].ok ? fb[i].error : fa[i].error));
        r.sup_diff = std::max(r.sup_diff, std::abs(fa[i].a_hat - fb[i].a_hat));
        r.sup_true = std::max(r.sup_true, std::abs(a.coefficient()(fa[i].center) - b.coefficient()(fa[i].center)));
    }
    r.op_norm_est = operator_norm_estimate(a, b, family, workers).value;
    r.w1inf_a = a.coefficient().sup_bound() + a.coefficient().lip_bound();
    r.w1inf_b = b.coefficient().sup_bound() + b.coefficient().lip_bound();
    r.rhs_bound = stability_bound_rhs(r.w1inf_a, r.w1inf_b, r.op_norm_est);
    return r;
}

}  // namespace scatrec::inverse
