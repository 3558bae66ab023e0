#pragma once

#include "scatrec/harness/config.hpp"
#include "scatrec/harness/fit.hpp"
#include "scatrec/inverse/recon.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace scatrec::harness {

using Cell = std::variant<double, long long, bool, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

struct NamedFit {
    std::string name;
    SlopeFit fit;
};

struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct Provenance {
    std::uint64_t config_hash = 0;
    std::string version;
    std::string started;   // UTC, ISO 8601
    std::string finished;
    int workers = 1;
};

struct SweepResult {
    std::string name;
    ExperimentKind kind = ExperimentKind::lambda;
    Table table;
    std::vector<NamedFit> slopes;
    std::vector<std::pair<std::string, double>> metrics;
    std::vector<Check> checks;
    std::vector<std::pair<double, inverse::StabilityReport>> stability;  // (h, report)
    Provenance provenance;

    bool passed() const;
};

// Runs the configured experiment with `workers` threads (0: config value, then
// hardware concurrency). Failing parameter rows are kept with a status
// message and make the result fail; nothing is written to disk.
SweepResult run_experiment(const ExperimentConfig& config, int workers = 0);

// 17 significant digits, '.' decimal point, '\n' line ends, header row.
std::string to_csv(const Table& table);
std::string to_json(const SweepResult& result);

// Write-then-rename in the target directory.
void write_atomic(const std::filesystem::path& path, const std::string& content);

struct WrittenFiles {
    std::filesystem::path csv;
    std::filesystem::path json;
};
WrittenFiles write_results(const SweepResult& result, const std::filesystem::path& dir);

}  // namespace scatrec::harness
