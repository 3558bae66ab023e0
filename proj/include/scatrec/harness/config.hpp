#pragma once

#include "scatrec/inverse/oracle.hpp"
#include "scatrec/nls/coefficient.hpp"
#include "scatrec/nls/scattering.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace scatrec::harness {

using spectral::Point;

enum class ExperimentKind { lambda, approx_id, scatter, born_gap, reconstruct, estimate_p, stability, convergence };

// "lambda", "approx-id", ... as used on the command line.
std::string to_string(ExperimentKind kind);
std::optional<ExperimentKind> parse_kind(const std::string& name);
const std::vector<std::string>& kind_names();

// Fixed grid for the convergence study (absolute units).
struct FixedGrid {
    int points = 64;
    double half_width = 8.0;
};

struct Thresholds {
    double max_rel_diff = 1e-6;       // lambda
    double min_slope = 0.0;           // approx-id, born-gap
    double max_sup_error = 0.1;       // reconstruct
    double max_power_error = 0.05;    // estimate-p
    double track_tol = 0.1;           // stability: sup-diff / h spread
    double ratio_lo = 3.5, ratio_hi = 4.5;  // convergence
    double max_mass_drift = 1e-8;
    double max_duhamel = 1e-4;
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::lambda;
    std::string name;
    int dim = 3;
    std::vector<int> dims;         // lambda sweep dimensions
    std::vector<double> p;         // one power, or a sweep
    double quad_tol = 1e-8;        // lambda

    inverse::GridPolicy policy;    // sigma-scaled experiments
    FixedGrid fixed_grid;          // convergence
    double T = 1.0;                // convergence
    std::vector<double> dts;       // convergence
    nls::ScatteringOptions scattering;

    nls::AnalyticCoefficient coefficient{1.0};
    std::optional<nls::AnalyticCoefficient> perturbation;  // stability: b = a + h g
    std::vector<double> h_values;

    std::vector<double> sigmas;
    std::vector<Point> centers;
    inverse::ProbeFamily family;   // operator-norm family (stability)

    Thresholds thresholds;
    std::filesystem::path output_dir;
    int workers = 0;
    std::uint64_t seed = 0;
    std::string canonical;          // normalized JSON the hash is taken over
};

// All problems found in a config, each naming the offending field(s).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> violations);
    const std::vector<std::string>& violations() const { return violations_; }

private:
    std::vector<std::string> violations_;
};

// Parses and validates; throws ConfigError listing every violation (parse
// errors and unwritable output paths included). Relative output paths are
// resolved against the config file's directory.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir);

// Replaces the output directory, creating it and checking it is writable
// (ConfigError otherwise).
void set_output_dir(ExperimentConfig& config, const std::filesystem::path& dir);

// 64-bit FNV-1a of the canonical config text.
std::uint64_t config_hash(const ExperimentConfig& config);

}  // namespace scatrec::harness
