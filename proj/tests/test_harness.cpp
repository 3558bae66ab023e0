#include "doctest.h"
#include "scatrec/harness/config.hpp"
#include "scatrec/harness/experiment.hpp"
#include "scatrec/harness/fit.hpp"
#include "scatrec/parallel.hpp"
#include "scatrec/special/lambda.hpp"

#include <json.hpp>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

using namespace scatrec;
using namespace scatrec::harness;
namespace fs = std::filesystem;

namespace {

// Fresh scratch directory per call, removed by the caller's scope guard.
struct Scratch {
    fs::path dir;
    Scratch() {
        std::random_device rd;
        dir = fs::temp_directory_path() / ("scatrec-test-" + std::to_string(rd()));
        fs::create_directories(dir);
    }
    ~Scratch() {
        std::error_code ec;
        fs::remove_all(dir, ec);
    }
};

std::vector<std::string> violations_of(const std::string& text, const fs::path& base) {
    try {
        parse_config(text, base);
    } catch (const ConfigError& e) {
        return e.violations();
    }
    return {};
}

bool mentions(const std::string& s, const std::string& what) { return s.find(what) != std::string::npos; }

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

const char* kRecon1d = R"({
  "experiment": "reconstruct", "dim": 1, "p": 4,
  "coefficient": {"constant": 1, "terms": [{"kind": "gaussian", "amplitude": 0.5, "center": [0], "width": 1}]},
  "probes": {"sigmas": [0.35, 0.25], "centers": {"lattice": {"min": -1, "max": 1, "count": 3}}},
  "output": {"dir": "out"}
})";

}  // namespace

TEST_CASE("fit_slope") {
    std::vector<std::pair<double, double>> cube;
    for (double x : {1.0, 2.0, 4.0, 8.0}) cube.emplace_back(x, x * x * x);
    const auto f = fit_slope(cube);
    CHECK(std::abs(f.slope - 3.0) <= 1e-12);
    CHECK(f.residual <= 1e-12);

    CHECK_THROWS_AS(fit_slope({{1.0, 1.0}, {2.0, 8.0}}), std::invalid_argument);
    CHECK_THROWS_AS(fit_slope({{1.0, 1.0}, {2.0, 0.0}, {3.0, 2.0}}), std::invalid_argument);
    CHECK_THROWS_AS(fit_slope({{2.0, 1.0}, {2.0, 3.0}, {2.0, 2.0}}), std::invalid_argument);

    std::vector<std::pair<double, double>> wobble;
    for (double x : {1.0, 2.0, 4.0, 8.0}) wobble.emplace_back(x, x * x * x * (1.0 + 0.01 * std::sin(x)));
    CHECK(std::abs(fit_slope(wobble).slope - 3.0) <= 0.05);

    const auto lin = fit_slope({{0.0, 1.0}, {1.0, 3.0}, {2.0, 5.0}}, Transform::linear);
    CHECK(lin.slope == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(lin.intercept == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("parallel_map keeps input order and surfaces the first error") {
    const auto sq = parallel_map(50, 4, [](std::size_t i) { return static_cast<int>(i * i); });
    for (std::size_t i = 0; i < sq.size(); ++i) CHECK(sq[i] == static_cast<int>(i * i));
    std::atomic<int> ran{0};
    auto boom = [&](std::size_t i) -> int {
        ++ran;
        if (i == 7 || i == 31) throw std::runtime_error("job " + std::to_string(i));
        return 0;
    };
    try {
        parallel_map(40, 3, boom);
        FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()) == "job 7");
    }
    CHECK(ran == 40);
}

TEST_CASE("load_config") {
    Scratch s;
    SUBCASE("minimal lambda config") {
        const auto c = parse_config(R"({"experiment": "lambda", "p": 2, "output": {"dir": "out"}})", s.dir);
        CHECK(c.kind == ExperimentKind::lambda);
        CHECK(c.p == std::vector<double>{2.0});
        CHECK(c.output_dir == s.dir / "out");
        CHECK(fs::is_directory(s.dir / "out"));
    }
    SUBCASE("missing p is a single named violation") {
        const auto v = violations_of(R"({"experiment": "lambda", "output": {"dir": "out"}})", s.dir);
        REQUIRE(v.size() == 1);
        CHECK(mentions(v[0], "p"));
    }
    SUBCASE("dt not dividing T names both fields") {
        const auto v = violations_of(R"({
          "experiment": "convergence", "p": 2, "coefficient": {"constant": 1},
          "grid": {"points": 32, "half_width": 8}, "solve": {"T": 1, "dt": [0.03, 0.01, 0.005]},
          "probes": {"sigmas": [0.5]}, "output": {"dir": "out"}})",
                                     s.dir);
        REQUIRE(v.size() == 1);
        CHECK(mentions(v[0], "solve.dt"));
        CHECK(mentions(v[0], "solve.T"));
    }
    SUBCASE("all violations are reported together") {
        const auto v = violations_of(R"({
          "experiment": "reconstruct", "p": "two", "dim": 7, "bogus": true,
          "probes": {"sigmas": [-0.1]}, "output": {"dir": "out"}})",
                                     s.dir);
        CHECK(v.size() >= 5);  // p, dim, bogus, coefficient, sigma
    }
    SUBCASE("power at or below 2/dim is rejected outside a lambda sweep") {
        const auto v = violations_of(R"({"experiment": "scatter", "dim": 1, "p": 2, "coefficient": {"constant": 1},
          "probes": {"sigmas": [0.3]}, "output": {"dir": "out"}})",
                                     s.dir);
        REQUIRE(v.size() == 1);
        CHECK(mentions(v[0], "2/dim"));
    }
    SUBCASE("parse errors and unknown kinds") {
        CHECK(violations_of("{not json", s.dir).size() == 1);
        CHECK(mentions(violations_of(R"({"experiment": "teleport", "p": 2, "output": {"dir": "o"}})", s.dir)[0],
                       "experiment"));
    }
    SUBCASE("unwritable output path") {
        fs::create_directories(s.dir / "blocked");
        std::ofstream(s.dir / "blocked" / "file") << "x";
        const auto v = violations_of(R"({"experiment": "lambda", "p": 2, "output": {"dir": "blocked/file/sub"}})", s.dir);
        REQUIRE(v.size() == 1);
        CHECK(mentions(v[0], "output.dir"));
    }
    SUBCASE("lattice centres, x_1 fastest") {
        const auto c = parse_config(R"({
          "experiment": "reconstruct", "dim": 2, "p": 2, "coefficient": {"constant": 1},
          "probes": {"sigmas": [0.3], "centers": {"lattice": {"min": -1, "max": 1, "count": 3}}},
          "output": {"dir": "out"}})",
                                    s.dir);
        REQUIRE(c.centers.size() == 9);
        CHECK(c.centers[1][0] == 0.0);
        CHECK(c.centers[1][1] == -1.0);
        CHECK(c.centers[3][1] == 0.0);
    }
    SUBCASE("seeded random coefficients are reproducible") {
        const std::string text = R"({
          "experiment": "scatter", "dim": 3, "p": 2, "seed": 42,
          "coefficient": {"constant": 1, "random": {"count": 4, "amplitude": 0.3, "width": 0.7, "radius": 1}},
          "probes": {"sigmas": [0.3]}, "output": {"dir": "out"}})";
        const auto a = parse_config(text, s.dir).coefficient;
        const auto b = parse_config(text, s.dir).coefficient;
        REQUIRE(a.terms().size() == 4);
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(a.terms()[i].amplitude == b.terms()[i].amplitude);
            CHECK(a.terms()[i].center == b.terms()[i].center);
            CHECK(std::abs(a.terms()[i].amplitude) <= 0.3);
        }
    }
    SUBCASE("hash ignores workers and output, sees everything else") {
        const auto a = parse_config(R"({"experiment": "lambda", "p": 2, "workers": 1, "output": {"dir": "a"}})", s.dir);
        const auto b = parse_config(R"({"experiment": "lambda", "p": 2, "workers": 4, "output": {"dir": "b"}})", s.dir);
        const auto c = parse_config(R"({"experiment": "lambda", "p": 3, "output": {"dir": "a"}})", s.dir);
        CHECK(config_hash(a) == config_hash(b));
        CHECK(config_hash(a) != config_hash(c));
    }
    SUBCASE("shipped configs load") {
        for (const auto& entry : fs::directory_iterator(fs::path(SCATREC_SOURCE_DIR) / "configs")) {
            CAPTURE(entry.path().string());
            auto text = read_file(entry.path());
            CHECK_NOTHROW(parse_config(text, s.dir));
        }
    }
}

TEST_CASE("run_experiment") {
    Scratch s;
    SUBCASE("lambda sweep matches lambda_const") {
        auto c = parse_config(R"({"experiment": "lambda", "dims": [1, 3], "p": [2.5, 3, 4], "output": {"dir": "o"}})",
                              s.dir);
        const auto r = run_experiment(c, 2);
        CHECK(r.passed());
        const auto files = write_results(r, c.output_dir);
        std::istringstream csv(read_file(files.csv));
        std::string line;
        std::getline(csv, line);
        CHECK(line == "d,p,lambda,lambda_quad,rel_diff,lambda_prime,lambda_prime_floor,status");
        int rows = 0;
        while (std::getline(csv, line)) {
            std::istringstream f(line);
            std::string d, p, lam;
            std::getline(f, d, ',');
            std::getline(f, p, ',');
            std::getline(f, lam, ',');
            const double ref = special::lambda_const(std::stoi(d), std::stod(p)).value;
            CHECK(std::abs(std::stod(lam) - ref) <= 1e-10 * ref);
            ++rows;
        }
        CHECK(rows == 6);
        const auto j = nlohmann::json::parse(read_file(files.json));
        CHECK(j["passed"] == true);
        CHECK(j["provenance"]["config_hash"].get<std::string>().size() == 16);
    }
    SUBCASE("failing rows are kept and flagged") {
        auto c = parse_config(R"({"experiment": "lambda", "dims": [1], "p": [1.5, 3], "output": {"dir": "o"}})", s.dir);
        const auto r = run_experiment(c, 1);
        CHECK_FALSE(r.passed());
        REQUIRE(r.table.rows.size() == 2);
        CHECK(std::get<std::string>(r.table.rows[0].back()).rfind("error:", 0) == 0);
        CHECK(std::get<std::string>(r.table.rows[1].back()) == "ok");
        const auto j = nlohmann::json::parse(to_json(r));
        REQUIRE(j["failures"].size() == 1);
        CHECK(j["failures"][0]["p"] == 1.5);
    }
    SUBCASE("byte-identical CSV across runs and worker counts") {
        const auto c = parse_config(kRecon1d, s.dir);
        const auto one = to_csv(run_experiment(c, 1).table);
        const auto again = to_csv(run_experiment(c, 1).table);
        const auto three = to_csv(run_experiment(c, 3).table);
        CHECK(one == again);
        CHECK(one == three);
        CHECK(one.find('\r') == std::string::npos);
        CHECK(one.rfind("x0_1,sigma,a_true,a_hat,error,certificate,mass_drift,status\n", 0) == 0);
    }
    SUBCASE("born-gap: slope column and pass flag follow the threshold") {
        // 1-D plumbing check (the 3-D rate is an acceptance criterion)
        const std::string base = R"({"experiment": "born-gap", "dim": 1, "p": 4, "coefficient": {"constant": 1},
          "probes": {"sigmas": [0.4, 0.3, 0.2]}, "output": {"dir": "o"}, "thresholds": {"min_slope": )";
        const auto r = run_experiment(parse_config(base + "0}}", s.dir), 1);
        REQUIRE(r.slopes.size() == 1);
        const double slope = r.slopes[0].fit.slope;
        auto gap_check = [](const SweepResult& res) {
            for (const auto& ch : res.checks)
                if (ch.name == "gap_slope") return ch.passed;
            return false;
        };
        CHECK(gap_check(r) == (slope >= 0.0));
        const auto strict = run_experiment(parse_config(base + std::to_string(slope + 0.5) + "}}", s.dir), 1);
        CHECK_FALSE(gap_check(strict));
        CHECK_FALSE(strict.passed());
    }
    SUBCASE("stability report has every field") {
        const auto c = parse_config(R"({
          "experiment": "stability", "dim": 1, "p": 4,
          "coefficient": {"constant": 1, "terms": [{"kind": "gaussian", "amplitude": 0.5, "center": [0], "width": 1}]},
          "perturbation": {"terms": [{"kind": "gaussian", "amplitude": 1, "center": [0.3], "width": 0.8}]},
          "h": [0.1], "probes": {"sigmas": [0.25], "centers": [[0], [0.3]]},
          "output": {"dir": "o"}})",
                                    s.dir);
        const auto r = run_experiment(c, 1);
        const auto j = nlohmann::json::parse(to_json(r));
        REQUIRE(j["stability_reports"].size() == 1);
        const auto& rep = j["stability_reports"][0];
        for (const char* key : {"sup_diff", "op_norm_est", "rhs_bound", "sigma_used", "slopes", "sup_true"})
            CHECK(rep.contains(key));
        CHECK(rep["op_norm_est"].get<double>() > 0.0);
        CHECK(rep["rhs_bound"].get<double>() > 0.0);
        CHECK(rep["sup_diff"].get<double>() > 0.0);
        CHECK(rep["sigma_used"] == 0.25);
    }
    SUBCASE("convergence study on a small 1-D grid") {
        const auto c = parse_config(R"({
          "experiment": "convergence", "dim": 1, "p": 4, "coefficient": {"constant": 1},
          "grid": {"points": 256, "half_width": 16}, "solve": {"T": 0.5, "dt": [0.02, 0.01, 0.005]},
          "probes": {"sigmas": [0.5]}, "output": {"dir": "o"}})",
                                    s.dir);
        const auto r = run_experiment(c, 2);
        CHECK(r.passed());
        REQUIRE(r.table.rows.size() == 3);
        CHECK(std::isfinite(std::get<double>(r.table.rows[0][5])));
    }
}

TEST_CASE("atomic writes") {
    Scratch s;
    const auto target = s.dir / "result.csv";
    write_atomic(target, "a,b\n1,2\n");
    CHECK(read_file(target) == "a,b\n1,2\n");
    write_atomic(target, "a,b\n3,4\n");
    CHECK(read_file(target) == "a,b\n3,4\n");
    CHECK_FALSE(fs::exists(s.dir / "result.csv.tmp"));
    // A failed write leaves neither a partial final file nor a temp file.
    CHECK_THROWS(write_atomic(s.dir / "missing" / "x.csv", "data"));
    CHECK_FALSE(fs::exists(s.dir / "missing" / "x.csv"));
}
