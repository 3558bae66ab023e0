#include "scatrec/harness/experiment.hpp"

#include "scatrec/gaussian/kernel.hpp"
#include "scatrec/nls/solver.hpp"
#include "scatrec/parallel.hpp"
#include "scatrec/special/lambda.hpp"
#include "scatrec/spectral/operators.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#ifndef SCATREC_VERSION
#define SCATREC_VERSION "unknown"
#endif

namespace scatrec::harness {
namespace {

using json = nlohmann::json;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

std::vector<std::string> center_columns(int dim) {
    std::vector<std::string> c;
    for (int k = 0; k < dim; ++k) c.push_back("x0_" + std::to_string(k + 1));
    return c;
}

void push_center(std::vector<Cell>& row, const Point& x, int dim) {
    for (int k = 0; k < dim; ++k) row.emplace_back(x[k]);
}

// Row for a failing job: NaN everywhere except the leading parameters.
std::vector<Cell> failed_row(std::vector<Cell> params, std::size_t width, const std::string& why) {
    while (params.size() + 1 < width) params.emplace_back(kNaN);
    params.emplace_back("error: " + why);
    return params;
}

bool row_ok(const std::vector<Cell>& row) {
    const auto* s = std::get_if<std::string>(&row.back());
    return s && *s == "ok";
}

void add_check(SweepResult& r, std::string name, bool ok, std::string detail = {}) {
    r.checks.push_back({std::move(name), ok, std::move(detail)});
}

void check_rows(SweepResult& r) {
    std::size_t bad = 0;
    for (const auto& row : r.table.rows)
        if (!row_ok(row)) ++bad;
    add_check(r, "all_rows_ok", bad == 0, std::to_string(bad) + " failing rows");
}

inverse::ScatteringOracle oracle_for(const ExperimentConfig& c, const nls::AnalyticCoefficient& a, double p) {
    return inverse::ScatteringOracle(c.dim, a, p, c.policy, c.scattering);
}

// ---------------------------------------------------------------------------

void run_lambda(const ExperimentConfig& c, int workers, SweepResult& r) {
    r.table.columns = {"d", "p", "lambda", "lambda_quad", "rel_diff", "lambda_prime", "lambda_prime_floor", "status"};
    std::vector<std::pair<int, double>> jobs;
    for (int d : c.dims)
        for (double p : c.p) jobs.emplace_back(d, p);
    r.table.rows = parallel_map(jobs.size(), workers, [&](std::size_t i) {
        const auto [d, p] = jobs[i];
        std::vector<Cell> params{static_cast<long long>(d), p};
        try {
            const double v = special::lambda_const(d, p).value;
            const double q = gaussian::quad_lambda(d, p, c.quad_tol);
            const bool has_prime = d == 3 && p >= special::kPowerMin && p <= special::kPowerMax;
            auto row = params;
            row.insert(row.end(), {v, q, std::abs(q / v - 1.0), has_prime ? special::lambda_prime(p) : kNaN,
                                   has_prime ? special::lambda_prime_floor(p) : kNaN, std::string("ok")});
            return row;
        } catch (const std::exception& e) {
            return failed_row(params, 8, e.what());
        }
    });
    check_rows(r);
    double worst = 0.0;
    std::size_t compared = 0;
    for (const auto& row : r.table.rows)
        if (row_ok(row)) {
            worst = std::max(worst, std::get<double>(row[4]));
            ++compared;
        }
    if (compared == 0) worst = kNaN;
    r.metrics.emplace_back("max_rel_diff", worst);
    add_check(r, "rel_diff", compared > 0 && worst <= c.thresholds.max_rel_diff,
              "max " + format_double(worst) + " vs " + format_double(c.thresholds.max_rel_diff));
}

void run_approx_id(const ExperimentConfig& c, int workers, SweepResult& r) {
    r.table.columns = center_columns(c.dim);
    for (const char* col : {"sigma", "integral", "main_term", "error", "status"}) r.table.columns.emplace_back(col);
    const double p = c.p.front();
    const auto grid = spectral::make_grid(c.dim, 16, 64.0);
    const auto profile = nls::CoefficientProfile::from_analytic(grid, c.coefficient);
    std::vector<std::pair<std::size_t, double>> jobs;
    for (std::size_t ci = 0; ci < c.centers.size(); ++ci)
        for (double s : c.sigmas) jobs.emplace_back(ci, s);
    const std::size_t width = r.table.columns.size();
    r.table.rows = parallel_map(jobs.size(), workers, [&](std::size_t i) {
        const auto [ci, s] = jobs[i];
        std::vector<Cell> params;
        push_center(params, c.centers[ci], c.dim);
        params.emplace_back(s);
        try {
            const auto res = gaussian::approx_identity_error(profile, gaussian::make_probe(s, c.centers[ci], c.dim), p);
            auto row = params;
            row.insert(row.end(), {res.integral, res.main_term, res.error, std::string("ok")});
            return row;
        } catch (const std::exception& e) {
            return failed_row(params, width, e.what());
        }
    });
    check_rows(r);
    const std::size_t err_col = c.dim + 3;
    for (std::size_t ci = 0; ci < c.centers.size(); ++ci) {
        std::vector<std::pair<double, double>> pts;
        for (std::size_t i = 0; i < jobs.size(); ++i)
            if (jobs[i].first == ci && row_ok(r.table.rows[i]))
                pts.emplace_back(jobs[i].second, std::get<double>(r.table.rows[i][err_col]));
        const std::string name = "error_vs_sigma#" + std::to_string(ci);
        try {
            const auto f = fit_slope(pts);
            r.slopes.push_back({name, f});
            add_check(r, "slope#" + std::to_string(ci), f.slope >= c.thresholds.min_slope,
                      format_double(f.slope) + " vs " + format_double(c.thresholds.min_slope));
        } catch (const std::exception& e) {
            add_check(r, "slope#" + std::to_string(ci), false, e.what());
        }
    }
}

void run_scatter(const ExperimentConfig& c, int workers, SweepResult& r) {
    r.table.columns = center_columns(c.dim);
    for (const char* col : {"sigma", "pairing_re", "pairing_im", "a_hat", "certificate", "mass_drift", "tail_minus",
                            "tail_plus", "max_amplitude", "accepted", "status"})
        r.table.columns.emplace_back(col);
    const double p = c.p.front();
    const auto oracle = oracle_for(c, c.coefficient, p);
    std::vector<std::pair<double, std::size_t>> jobs;
    for (double s : c.sigmas)
        for (std::size_t ci = 0; ci < c.centers.size(); ++ci) jobs.emplace_back(s, ci);
    const std::size_t width = r.table.columns.size();
    r.table.rows = parallel_map(jobs.size(), workers, [&](std::size_t i) {
        const auto [s, ci] = jobs[i];
        std::vector<Cell> params;
        push_center(params, c.centers[ci], c.dim);
        params.emplace_back(s);
        try {
            const auto rec = oracle.apply(gaussian::make_probe(s, c.centers[ci], c.dim));
            const auto& d = rec.diagnostics;
            auto row = params;
            row.insert(row.end(), {rec.pairing.real(), rec.pairing.imag(),
                                   inverse::pairing_to_coefficient(rec.pairing, s, c.dim, p), d.certificate,
                                   d.solve.mass_drift, d.solve.tail_minus, d.solve.tail_plus, d.solve.max_amplitude,
                                   rec.accepted, rec.accepted ? std::string("ok") : "rejected: " + rec.rejection});
            return row;
        } catch (const std::exception& e) {
            return failed_row(params, width, e.what());
        }
    });
    check_rows(r);
}

void run_born_gap(const ExperimentConfig& c, int workers, SweepResult& r) {
    r.table.columns = {"sigma",         "pairing_re",        "pairing_im",           "born_im",
                       "gap",           "rel_gap",           "certificate",          "mass_drift",
                       "strichartz_lebesgue", "strichartz_gradient", "strichartz_critical", "status"};
    const double p = c.p.front();
    const auto oracle = oracle_for(c, c.coefficient, p);
    const Point x0 = c.centers.front();
    r.table.rows = parallel_map(c.sigmas.size(), workers, [&](std::size_t i) {
        const double s = c.sigmas[i];
        std::vector<Cell> params{s};
        try {
            const auto grid = oracle.grid_for(s);
            const auto u = gaussian::probe_field(gaussian::make_probe(s, {0.0, 0.0, 0.0}, c.dim), grid);
            auto spec = oracle.spec_for(s, x0);
            spec.record_strichartz = true;
            const auto rec = nls::scattering_map(u, spec, c.scattering);
            const auto born = nls::born_pairing(u, spec);
            const double gap = std::abs(rec.pairing - born);
            const auto& st = *rec.diagnostics.strichartz;
            auto row = params;
            row.insert(row.end(), {rec.pairing.real(), rec.pairing.imag(), born.imag(), gap, gap / std::abs(born),
                                   rec.diagnostics.certificate, rec.diagnostics.solve.mass_drift, st.lebesgue,
                                   st.gradient, st.critical,
                                   rec.accepted ? std::string("ok") : "rejected: " + rec.rejection});
            return row;
        } catch (const std::exception& e) {
            return failed_row(params, 12, e.what());
        }
    });
    check_rows(r);
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < c.sigmas.size(); ++i)
        if (row_ok(r.table.rows[i])) pts.emplace_back(c.sigmas[i], std::get<double>(r.table.rows[i][4]));
    try {
        const auto f = fit_slope(pts);
        r.slopes.push_back({"gap_vs_sigma", f});
        add_check(r, "gap_slope", f.slope >= c.thresholds.min_slope,
                  format_double(f.slope) + " vs " + format_double(c.thresholds.min_slope));
    } catch (const std::exception& e) {
        add_check(r, "gap_slope", false, e.what());
    }
    // Strichartz ratios should not depend on sigma beyond a factor 2.
    for (std::size_t col : {8u, 9u, 10u}) {
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (const auto& row : r.table.rows) {
            if (!row_ok(row)) continue;
            lo = std::min(lo, std::get<double>(row[col]));
            hi = std::max(hi, std::get<double>(row[col]));
        }
        const double spread = hi / lo;
        r.metrics.emplace_back(r.table.columns[col] + "_spread", spread);
        add_check(r, r.table.columns[col] + "_uniform", spread <= 2.0, "max/min " + format_double(spread));
    }
}

void run_reconstruct(const ExperimentConfig& c, int workers, SweepResult& r) {
    r.table.columns = center_columns(c.dim);
    for (const char* col : {"sigma", "a_true", "a_hat", "error", "certificate", "mass_drift", "status"})
        r.table.columns.emplace_back(col);
    const double p = c.p.front();
    const auto oracle = oracle_for(c, c.coefficient, p);
    std::vector<std::pair<double, std::size_t>> jobs;
    for (double s : c.sigmas)
        for (std::size_t ci = 0; ci < c.centers.size(); ++ci) jobs.emplace_back(s, ci);
    const std::size_t width = r.table.columns.size();
    r.table.rows = parallel_map(jobs.size(), workers, [&](std::size_t i) {
        const auto [s, ci] = jobs[i];
        std::vector<Cell> params;
        push_center(params, c.centers[ci], c.dim);
        params.emplace_back(s);
        try {
            const auto e = inverse::reconstruct_point(oracle, s, c.centers[ci]);
            const double truth = c.coefficient(c.centers[ci]);
            auto row = params;
            row.insert(row.end(), {truth, e.a_hat, e.a_hat - truth, e.certificate, e.mass_drift, std::string("ok")});
            return row;
        } catch (const std::exception& e) {
            return failed_row(params, width, e.what());
        }
    });
    check_rows(r);

    std::map<double, double> sup;  // sigma -> sup |error|
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const double err = row_ok(r.table.rows[i]) ? std::abs(std::get<double>(r.table.rows[i][c.dim + 3]))
                                                   : std::numeric_limits<double>::infinity();
        sup[jobs[i].first] = std::max(sup[jobs[i].first], err);
    }
    for (const auto& [s, e] : sup) r.metrics.emplace_back("sup_error@sigma=" + format_double(s), e);
    const double smallest = sup.begin()->second;
    add_check(r, "sup_error", smallest <= c.thresholds.max_sup_error,
              format_double(smallest) + " at sigma " + format_double(sup.begin()->first) + " vs " +
                  format_double(c.thresholds.max_sup_error));
    if (sup.size() >= 2) {
        bool mono = true;
        double prev = -1.0;
        for (const auto& [s, e] : sup) {
            if (!(e > prev)) mono = false;
            prev = e;
        }
        add_check(r, "error_decreases_with_sigma", mono);
    }
}

void run_estimate_p(const ExperimentConfig& c, int workers, SweepResult& r) {
    r.table.columns = {"p", "sigma", "lambda_true", "lambda_hat", "p_hat", "abs_error", "clamped", "status"};
    const double s = c.sigmas.front();
    r.table.rows = parallel_map(c.p.size(), workers, [&](std::size_t i) {
        const double p = c.p[i];
        std::vector<Cell> params{p, s};
        try {
            const auto oracle = oracle_for(c, nls::AnalyticCoefficient(1.0), p);
            const auto est = inverse::estimate_power(oracle, s);
            auto row = params;
            row.insert(row.end(), {special::lambda_const(3, p).value, est.lambda_hat, est.p_hat,
                                   std::abs(est.p_hat - p), est.clamped, std::string("ok")});
            return row;
        } catch (const std::exception& e) {
            return failed_row(params, 8, e.what());
        }
    });
    check_rows(r);
    double worst = 0.0;
    for (const auto& row : r.table.rows)
        worst = std::max(worst, row_ok(row) ? std::get<double>(row[5]) : std::numeric_limits<double>::infinity());
    r.metrics.emplace_back("max_abs_error", worst);
    add_check(r, "power_error", worst <= c.thresholds.max_power_error,
              format_double(worst) + " vs " + format_double(c.thresholds.max_power_error));
}

void run_stability(const ExperimentConfig& c, int workers, SweepResult& r) {
    r.table.columns = {"h", "sup_true", "sup_diff", "sup_diff_over_h", "op_norm_est", "rhs_bound",
                       "w1inf_a", "w1inf_b", "status"};
    const double p = c.p.front();
    const double s = c.sigmas.front();
    const auto oa = oracle_for(c, c.coefficient, p);
    const auto fa = inverse::reconstruct_field(oa, s, c.centers, workers);
    std::string fa_error;
    for (std::size_t i = 0; i < fa.size(); ++i)
        if (!fa[i].ok && fa_error.empty()) fa_error = "centre #" + std::to_string(i) + " of a: " + fa[i].error;

    for (double h : c.h_values) {
        std::vector<Cell> params{h};
        try {
            if (!fa_error.empty()) throw std::runtime_error(fa_error);
            const auto b = c.coefficient.plus(*c.perturbation, h);
            const auto ob = oracle_for(c, b, p);
            const auto fb = inverse::reconstruct_field(ob, s, c.centers, workers);
            inverse::StabilityReport rep;
            rep.sigma_used = s;
            for (std::size_t i = 0; i < c.centers.size(); ++i) {
                if (!fb[i].ok) throw std::runtime_error("centre #" + std::to_string(i) + " of b: " + fb[i].error);
                rep.sup_diff = std::max(rep.sup_diff, std::abs(fa[i].a_hat - fb[i].a_hat));
                rep.sup_true = std::max(rep.sup_true, std::abs(c.coefficient(c.centers[i]) - b(c.centers[i])));
            }
            rep.op_norm_est = inverse::operator_norm_estimate(oa, ob, c.family, workers).value;
            rep.w1inf_a = c.coefficient.sup_bound() + c.coefficient.lip_bound();
            rep.w1inf_b = b.sup_bound() + b.lip_bound();
            rep.rhs_bound = inverse::stability_bound_rhs(rep.w1inf_a, rep.w1inf_b, rep.op_norm_est);
            r.stability.emplace_back(h, rep);
            auto row = params;
            row.insert(row.end(), {rep.sup_true, rep.sup_diff, rep.sup_diff / h, rep.op_norm_est, rep.rhs_bound,
                                   rep.w1inf_a, rep.w1inf_b, std::string("ok")});
            r.table.rows.push_back(std::move(row));
        } catch (const std::exception& e) {
            r.table.rows.push_back(failed_row(params, 9, e.what()));
        }
    }
    check_rows(r);
    if (r.stability.size() != c.h_values.size()) return;

    // h ascending for the monotonicity check
    auto reps = r.stability;
    std::sort(reps.begin(), reps.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    if (reps.size() >= 2) {
        bool mono = true;
        for (std::size_t i = 1; i < reps.size(); ++i)
            if (!(reps[i].second.op_norm_est > reps[i - 1].second.op_norm_est)) mono = false;
        add_check(r, "op_norm_monotone_in_h", mono);

        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (const auto& [h, rep] : reps) {
            lo = std::min(lo, rep.sup_diff / h);
            hi = std::max(hi, rep.sup_diff / h);
        }
        const double spread = hi / lo - 1.0;
        r.metrics.emplace_back("sup_diff_over_h_spread", spread);
        add_check(r, "sup_diff_tracks_h", spread <= c.thresholds.track_tol,
                  "max/min of sup_diff/h - 1 = " + format_double(spread));
    }

    double C = 0.0;
    for (const auto& [h, rep] : reps) C = std::max(C, rep.sup_true / rep.rhs_bound);
    r.metrics.emplace_back("fitted_C", C);
    bool holds = true;
    for (const auto& [h, rep] : reps) holds = holds && rep.sup_true <= C * rep.rhs_bound * (1.0 + 1e-12);
    add_check(r, "bound_holds_with_fitted_C", holds, "C = " + format_double(C));

    std::vector<NamedFit> fits;
    if (reps.size() >= 3) {
        std::vector<std::pair<double, double>> diff_vs_op, op_vs_h, diff_vs_h;
        for (const auto& [h, rep] : reps) {
            diff_vs_op.emplace_back(rep.op_norm_est, rep.sup_diff);
            op_vs_h.emplace_back(h, rep.op_norm_est);
            diff_vs_h.emplace_back(h, rep.sup_diff);
        }
        try {
            fits.push_back({"sup_diff_vs_op_norm", fit_slope(diff_vs_op)});
            fits.push_back({"op_norm_vs_h", fit_slope(op_vs_h)});
            fits.push_back({"sup_diff_vs_h", fit_slope(diff_vs_h)});
        } catch (const std::exception& e) {
            add_check(r, "slope_fits", false, e.what());
        }
    }
    for (auto& [h, rep] : r.stability)
        for (const auto& f : fits) rep.slopes.emplace_back(f.name, f.fit.slope);
    r.slopes = fits;
}

void run_convergence(const ExperimentConfig& c, int workers, SweepResult& r) {
    r.table.columns = {"dt", "steps", "mass_drift", "duhamel_residual", "diff_to_next", "richardson_ratio", "status"};
    const double p = c.p.front();
    const auto grid = spectral::make_grid(c.dim, c.fixed_grid.points, c.fixed_grid.half_width);
    const auto u0 = gaussian::probe_field(gaussian::make_probe(c.sigmas.front(), c.centers.front(), c.dim), grid);
    auto dts = c.dts;
    std::sort(dts.begin(), dts.end(), std::greater<>());

    struct Run {
        nls::ComplexField final_state;
        double drift = kNaN, duhamel = kNaN;
        long steps = 0;
        std::string error;
    };
    const auto runs = parallel_map(dts.size(), workers, [&](std::size_t i) {
        Run out;
        try {
            nls::SolveSpec spec;
            spec.p = p;
            spec.coeff = nls::CoefficientProfile::from_analytic(grid, c.coefficient);
            spec.T = c.T;
            spec.dt = dts[i];
            spec.record_duhamel = i + 1 == dts.size();
            auto traj = nls::solve_from_past(u0, spec);
            out.final_state = std::move(traj.final_state);
            out.drift = traj.diagnostics.mass_drift;
            out.duhamel = traj.diagnostics.duhamel_residual;
            out.steps = traj.diagnostics.steps;
        } catch (const std::exception& e) {
            out.error = e.what();
        }
        return out;
    });

    std::vector<double> diffs(dts.size(), kNaN);
    for (std::size_t i = 0; i + 1 < dts.size(); ++i)
        if (runs[i].error.empty() && runs[i + 1].error.empty())
            diffs[i] = std::sqrt(spectral::mass(runs[i].final_state - runs[i + 1].final_state));
    bool ratios_ok = dts.size() >= 3;
    bool drift_ok = true;
    for (std::size_t i = 0; i < dts.size(); ++i) {
        std::vector<Cell> params{dts[i]};
        if (!runs[i].error.empty()) {
            r.table.rows.push_back(failed_row(params, 7, runs[i].error));
            ratios_ok = drift_ok = false;
            continue;
        }
        const double ratio = i + 2 < dts.size() ? diffs[i] / diffs[i + 1] : kNaN;
        if (i + 2 < dts.size()) {
            r.metrics.emplace_back("richardson_ratio@dt=" + format_double(dts[i]), ratio);
            ratios_ok = ratios_ok && ratio >= c.thresholds.ratio_lo && ratio <= c.thresholds.ratio_hi;
        }
        drift_ok = drift_ok && runs[i].drift <= c.thresholds.max_mass_drift;
        r.table.rows.push_back({dts[i], static_cast<long long>(runs[i].steps), runs[i].drift, runs[i].duhamel,
                                diffs[i], ratio, std::string("ok")});
    }
    check_rows(r);
    add_check(r, "richardson_ratio", ratios_ok,
              "in [" + format_double(c.thresholds.ratio_lo) + ", " + format_double(c.thresholds.ratio_hi) + "]");
    add_check(r, "mass_drift", drift_ok);
    const double duh = runs.back().duhamel;
    r.metrics.emplace_back("duhamel_residual", duh);
    add_check(r, "duhamel_residual", duh <= c.thresholds.max_duhamel, format_double(duh));
}

json cell_json(const Cell& cell) {
    return std::visit([](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
            if (!std::isfinite(v)) return nullptr;
        }
        return v;
    }, cell);
}

}  // namespace

bool SweepResult::passed() const {
    if (checks.empty()) return false;
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

SweepResult run_experiment(const ExperimentConfig& config, int workers) {
    SweepResult r;
    r.name = config.name;
    r.kind = config.kind;
    r.provenance.config_hash = config_hash(config);
    r.provenance.version = SCATREC_VERSION;
    r.provenance.started = utc_now();
    const int w = resolve_workers(workers > 0 ? workers : config.workers);
    r.provenance.workers = w;

    switch (config.kind) {
        case ExperimentKind::lambda: run_lambda(config, w, r); break;
        case ExperimentKind::approx_id: run_approx_id(config, w, r); break;
        case ExperimentKind::scatter: run_scatter(config, w, r); break;
        case ExperimentKind::born_gap: run_born_gap(config, w, r); break;
        case ExperimentKind::reconstruct: run_reconstruct(config, w, r); break;
        case ExperimentKind::estimate_p: run_estimate_p(config, w, r); break;
        case ExperimentKind::stability: run_stability(config, w, r); break;
        case ExperimentKind::convergence: run_convergence(config, w, r); break;
    }
    r.provenance.finished = utc_now();
    return r;
}

std::string to_csv(const Table& table) {
    std::string out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) out += ',';
        out += csv_escape(table.columns[i]);
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            std::visit([&](const auto& v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, double>) out += format_double(v);
                else if constexpr (std::is_same_v<T, long long>) out += std::to_string(v);
                else if constexpr (std::is_same_v<T, bool>) out += v ? "true" : "false";
                else out += csv_escape(v);
            }, row[i]);
        }
        out += '\n';
    }
    return out;
}

std::string to_json(const SweepResult& r) {
    json j;
    j["name"] = r.name;
    j["experiment"] = to_string(r.kind);
    j["passed"] = r.passed();
    j["csv"] = r.name + ".csv";
    json checks = json::array();
    for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    j["checks"] = checks;
    json slopes = json::object();
    for (const auto& f : r.slopes)
        slopes[f.name] = {{"slope", f.fit.slope}, {"intercept", f.fit.intercept}, {"residual", f.fit.residual}};
    j["slopes"] = slopes;
    json metrics = json::object();
    for (const auto& [k, v] : r.metrics) metrics[k] = std::isfinite(v) ? json(v) : json(nullptr);
    j["metrics"] = metrics;
    if (!r.stability.empty()) {
        json reps = json::array();
        for (const auto& [h, rep] : r.stability) {
            json s = json::object();
            for (const auto& [k, v] : rep.slopes) s[k] = v;
            reps.push_back({{"h", h},
                            {"sup_diff", rep.sup_diff},
                            {"sup_true", rep.sup_true},
                            {"op_norm_est", rep.op_norm_est},
                            {"rhs_bound", rep.rhs_bound},
                            {"w1inf_a", rep.w1inf_a},
                            {"w1inf_b", rep.w1inf_b},
                            {"sigma_used", rep.sigma_used},
                            {"slopes", s}});
        }
        j["stability_reports"] = reps;
    }
    // Failing rows repeated here with their parameters for quick triage.
    json failures = json::array();
    for (const auto& row : r.table.rows) {
        if (row_ok(row)) continue;
        json f = json::object();
        for (std::size_t i = 0; i < row.size() && i < r.table.columns.size(); ++i) f[r.table.columns[i]] = cell_json(row[i]);
        failures.push_back(f);
    }
    j["failures"] = failures;
    char hash[17];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(r.provenance.config_hash));
    j["provenance"] = {{"config_hash", hash},
                       {"version", r.provenance.version},
                       {"started", r.provenance.started},
                       {"finished", r.provenance.finished},
                       {"workers", r.provenance.workers}};
    return j.dump(2) + "\n";
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open " + tmp.string());
        os.write(content.data(), static_cast<std::streamsize>(content.size()));
        os.flush();
        if (!os) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

WrittenFiles write_results(const SweepResult& result, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    WrittenFiles w{dir / (result.name + ".csv"), dir / (result.name + ".json")};
    write_atomic(w.csv, to_csv(result.table));
    write_atomic(w.json, to_json(result));
    return w;
}

}  // namespace scatrec::harness
