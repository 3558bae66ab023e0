// scatrec: run one configured experiment and write <name>.csv / <name>.json.
//
//   scatrec <experiment> --config FILE [--workers N] [--out DIR]
//   scatrec validate --config FILE
//
// Exit status: 0 all checks passed, 1 some check failed, 2 bad usage or
// configuration, 3 run-time error.

#include "scatrec/harness/experiment.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>

namespace {

int workers_from_env() {
    const char* env = std::getenv("SCATREC_WORKERS");
    if (!env || !*env) return 0;
    try {
        const int w = std::stoi(env);
        return w > 0 ? w : 0;
    } catch (const std::exception&) {
        std::cerr << "scatrec: ignoring SCATREC_WORKERS=" << env << "\n";
        return 0;
    }
}

}  // namespace

int main(int argc, char** argv) {
    using namespace scatrec::harness;

    CLI::App app{"Scattering-map experiments: forward solves, coefficient and power recovery, rate checks"};
    app.require_subcommand(1);

    std::string config_path;
    int workers = 0;
    std::string out_dir;

    std::vector<CLI::App*> runs;
    for (const auto& name : kind_names()) {
        auto* sub = app.add_subcommand(name, "run the " + name + " experiment described by a config");
        sub->add_option("--config", config_path, "experiment JSON")->required()->check(CLI::ExistingFile);
        sub->add_option("--workers", workers, "worker threads (default: SCATREC_WORKERS, then config, then all cores)")
            ->check(CLI::PositiveNumber);
        sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
        runs.push_back(sub);
    }
    auto* validate = app.add_subcommand("validate", "check a config and list every violation");
    validate->add_option("--config", config_path, "experiment JSON")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    ExperimentConfig cfg;
    try {
        cfg = load_config(config_path);
        if (!out_dir.empty()) set_output_dir(cfg, out_dir);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    if (validate->parsed()) {
        std::cout << config_path << ": valid " << to_string(cfg.kind) << " experiment\n";
        return 0;
    }

    const std::string sub = app.get_subcommands().front()->get_name();
    if (sub != to_string(cfg.kind)) {
        std::cerr << "scatrec: config describes a " << to_string(cfg.kind) << " experiment, not " << sub << "\n";
        return 2;
    }
    if (workers == 0) workers = workers_from_env();

    try {
        const SweepResult res = run_experiment(cfg, workers);
        const auto files = write_results(res, cfg.output_dir);
        for (const auto& c : res.checks)
            std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << (c.detail.empty() ? "" : "  (" + c.detail + ")")
                      << "\n";
        std::cout << "wrote " << files.csv.string() << "\n      " << files.json.string() << "\n";
        return res.passed() ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "scatrec: " << e.what() << "\n";
        return 3;
    }
}
