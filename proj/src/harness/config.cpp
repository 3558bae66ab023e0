#include "scatrec/harness/config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace scatrec::harness {
namespace {

using json = nlohmann::json;

const std::vector<std::pair<ExperimentKind, std::string>>& kind_table() {
    static const std::vector<std::pair<ExperimentKind, std::string>> t{
        {ExperimentKind::lambda, "lambda"},          {ExperimentKind::approx_id, "approx-id"},
        {ExperimentKind::scatter, "scatter"},        {ExperimentKind::born_gap, "born-gap"},
        {ExperimentKind::reconstruct, "reconstruct"}, {ExperimentKind::estimate_p, "estimate-p"},
        {ExperimentKind::stability, "stability"},    {ExperimentKind::convergence, "convergence"}};
    return t;
}

bool divides(double step, double total) {
    const double n = total / step;
    return n >= 1.0 && std::abs(n - std::round(n)) <= 1e-9 * n;
}

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
}

// Collects violations while reading; every getter returns a usable default
// after recording a problem so that validation continues.
class Reader {
public:
    std::vector<std::string> errors;

    void fail(const std::string& path, const std::string& what) { errors.push_back(path + ": " + what); }

    const json* find(const json& obj, const std::string& key) const {
        if (!obj.is_object()) return nullptr;
        auto it = obj.find(key);
        return it == obj.end() ? nullptr : &*it;
    }

    double number(const json& v, const std::string& path) {
        if (!v.is_number()) {
            fail(path, "must be a number");
            return 0.0;
        }
        const double x = v.get<double>();
        if (!std::isfinite(x)) fail(path, "must be finite");
        return x;
    }

    double positive(const json& v, const std::string& path) {
        const double x = number(v, path);
        if (v.is_number() && !(x > 0.0)) fail(path, "must be > 0");
        return x;
    }

    long integer(const json& v, const std::string& path, long lo) {
        if (!v.is_number_integer()) {
            fail(path, "must be an integer");
            return lo;
        }
        const long x = v.get<long>();
        if (x < lo) fail(path, "must be >= " + std::to_string(lo));
        return x;
    }

    std::vector<double> numbers(const json& v, const std::string& path, std::size_t min_count, bool positive_only) {
        std::vector<double> out;
        if (v.is_number()) {
            out.push_back(positive_only ? positive(v, path) : number(v, path));
        } else if (v.is_array()) {
            for (std::size_t i = 0; i < v.size(); ++i) {
                const std::string p = path + "[" + std::to_string(i) + "]";
                out.push_back(positive_only ? positive(v[i], p) : number(v[i], p));
            }
        } else {
            fail(path, "must be a number or an array of numbers");
            return out;
        }
        if (out.size() < min_count) fail(path, "needs at least " + std::to_string(min_count) + " values");
        return out;
    }

    Point point(const json& v, const std::string& path, int dim) {
        Point x{0.0, 0.0, 0.0};
        if (!v.is_array() || static_cast<int>(v.size()) != dim) {
            fail(path, "must be an array of " + std::to_string(dim) + " numbers");
            return x;
        }
        for (int k = 0; k < dim; ++k) x[k] = number(v[k], path + "[" + std::to_string(k) + "]");
        return x;
    }

    std::vector<Point> points(const json& v, const std::string& path, int dim) {
        std::vector<Point> out;
        if (v.is_array()) {
            for (std::size_t i = 0; i < v.size(); ++i)
                out.push_back(point(v[i], path + "[" + std::to_string(i) + "]", dim));
        } else if (const json* lat = find(v, "lattice")) {
            const std::string lp = path + ".lattice";
            const json* lo = find(*lat, "min");
            const json* hi = find(*lat, "max");
            const json* cnt = find(*lat, "count");
            if (!lo || !hi || !cnt) {
                fail(lp, "needs min, max and count");
                return out;
            }
            const double a = number(*lo, lp + ".min"), b = number(*hi, lp + ".max");
            const long n = integer(*cnt, lp + ".count", 1);
            if (n < 1) return out;
            if (n > 1 && !(b > a)) fail(lp, "max must exceed min");
            std::vector<double> axis;
            for (long i = 0; i < n; ++i) axis.push_back(n == 1 ? a : a + (b - a) * static_cast<double>(i) / (n - 1));
            // x_1 fastest, like the field layout
            const long total = static_cast<long>(std::pow(n, dim));
            for (long flat = 0; flat < total; ++flat) {
                Point x{0.0, 0.0, 0.0};
                long r = flat;
                for (int k = 0; k < dim; ++k) {
                    x[k] = axis[r % n];
                    r /= n;
                }
                out.push_back(x);
            }
        } else {
            fail(path, "must be a list of points or {\"lattice\": {min, max, count}}");
        }
        if (out.empty() && errors.empty()) fail(path, "no centers");
        return out;
    }

    nls::AnalyticCoefficient coefficient(const json& v, const std::string& path, int dim, std::uint64_t seed) {
        nls::AnalyticCoefficient a;
        if (!v.is_object()) {
            fail(path, "must be an object");
            return a;
        }
        for (const auto& [key, _] : v.items())
            if (key != "constant" && key != "terms" && key != "random") fail(path + "." + key, "unknown field");
        if (const json* c = find(v, "constant")) a = nls::AnalyticCoefficient(number(*c, path + ".constant"));
        if (const json* terms = find(v, "terms")) {
            if (!terms->is_array()) {
                fail(path + ".terms", "must be an array");
            } else {
                for (std::size_t i = 0; i < terms->size(); ++i) {
                    const std::string tp = path + ".terms[" + std::to_string(i) + "]";
                    const json& t = (*terms)[i];
                    nls::CoefficientTerm term;
                    const json* kind = find(t, "kind");
                    if (!kind || !kind->is_string() ||
                        (kind->get<std::string>() != "gaussian" && kind->get<std::string>() != "hat")) {
                        fail(tp + ".kind", "must be \"gaussian\" or \"hat\"");
                    } else {
                        term.kind = kind->get<std::string>() == "hat" ? nls::CoefficientTerm::Kind::hat
                                                                      : nls::CoefficientTerm::Kind::gaussian;
                    }
                    if (const json* amp = find(t, "amplitude")) term.amplitude = number(*amp, tp + ".amplitude");
                    else fail(tp + ".amplitude", "required");
                    if (const json* w = find(t, "width")) term.width = positive(*w, tp + ".width");
                    else fail(tp + ".width", "required");
                    if (const json* c = find(t, "center")) term.center = point(*c, tp + ".center", dim);
                    a.add(term);
                }
            }
        }
        if (const json* r = find(v, "random")) {
            // count Gaussian terms with uniform amplitudes in [-amplitude, amplitude]
            // and centres in the cube of half width `radius`, drawn from `seed`.
            const std::string rp = path + ".random";
            const json* cnt = find(*r, "count");
            const json* amp = find(*r, "amplitude");
            const json* w = find(*r, "width");
            const json* rad = find(*r, "radius");
            if (!cnt || !amp || !w || !rad) {
                fail(rp, "needs count, amplitude, width and radius");
            } else {
                const long n = integer(*cnt, rp + ".count", 1);
                const double am = number(*amp, rp + ".amplitude");
                const double wd = positive(*w, rp + ".width");
                const double rd = number(*rad, rp + ".radius");
                std::mt19937_64 gen(seed);
                std::uniform_real_distribution<double> u(-1.0, 1.0);
                for (long i = 0; i < n; ++i) {
                    nls::CoefficientTerm term;
                    term.amplitude = am * u(gen);
                    for (int k = 0; k < dim; ++k) term.center[k] = rd * u(gen);
                    term.width = wd;
                    a.add(term);
                }
            }
        }
        return a;
    }
};

void check_writable(Reader& rd, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        rd.fail("output.dir", "cannot create " + dir.string() + " (" + ec.message() + ")");
        return;
    }
    const auto probe = dir / ".scatrec-write-test";
    {
        std::ofstream f(probe);
        if (!f) {
            rd.fail("output.dir", dir.string() + " is not writable");
            return;
        }
    }
    std::filesystem::remove(probe, ec);
}

}  // namespace

std::string to_string(ExperimentKind kind) {
    for (const auto& [k, n] : kind_table())
        if (k == kind) return n;
    return "?";
}

std::optional<ExperimentKind> parse_kind(const std::string& name) {
    for (const auto& [k, n] : kind_table())
        if (n == name) return k;
    return std::nullopt;
}

const std::vector<std::string>& kind_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [k, n] : kind_table()) v.push_back(n);
        return v;
    }();
    return names;
}

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::runtime_error([&] {
          std::string m = "invalid configuration:";
          for (const auto& v : violations) m += "\n  " + v;
          return m;
      }()),
      violations_(std::move(violations)) {}

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError({std::string("parse error: ") + e.what()});
    }
    if (!root.is_object()) throw ConfigError({"top level must be a JSON object"});

    Reader rd;
    ExperimentConfig c;
    static const std::vector<std::string> known{"experiment", "name", "p", "dim", "dims", "quad_tol", "grid",
                                                "solve", "coefficient", "perturbation", "h", "probes", "family",
                                                "thresholds", "output", "workers", "seed"};
    for (const auto& [key, _] : root.items())
        if (std::find(known.begin(), known.end(), key) == known.end()) rd.fail(key, "unknown field");

    const json* kind = rd.find(root, "experiment");
    if (!kind || !kind->is_string() || !parse_kind(kind->get<std::string>())) {
        std::string names;
        for (const auto& n : kind_names()) names += (names.empty() ? "" : ", ") + n;
        rd.fail("experiment", "required, one of " + names);
    } else {
        c.kind = *parse_kind(kind->get<std::string>());
    }
    const auto K = c.kind;
    const bool scaled = K == ExperimentKind::scatter || K == ExperimentKind::born_gap ||
                        K == ExperimentKind::reconstruct || K == ExperimentKind::estimate_p ||
                        K == ExperimentKind::stability;

    if (const json* n = rd.find(root, "name")) {
        if (!n->is_string() || n->get<std::string>().empty()) rd.fail("name", "must be a non-empty string");
        else c.name = n->get<std::string>();
    }
    if (c.name.empty()) c.name = to_string(K);
    if (c.name.find('/') != std::string::npos) rd.fail("name", "must not contain '/'");

    if (const json* s = rd.find(root, "seed")) c.seed = static_cast<std::uint64_t>(rd.integer(*s, "seed", 0));
    if (const json* w = rd.find(root, "workers")) c.workers = static_cast<int>(rd.integer(*w, "workers", 0));

    if (const json* d = rd.find(root, "dim")) {
        c.dim = static_cast<int>(rd.integer(*d, "dim", 1));
        if (c.dim > 3) rd.fail("dim", "must be 1, 2 or 3");
    }
    if (K == ExperimentKind::estimate_p && c.dim != 3) rd.fail("dim", "estimate-p needs dim 3");
    c.dims = {c.dim};
    if (const json* ds = rd.find(root, "dims")) {
        c.dims.clear();
        if (!ds->is_array() || ds->empty()) rd.fail("dims", "must be a non-empty array of integers");
        else
            for (std::size_t i = 0; i < ds->size(); ++i) {
                const long d = rd.integer((*ds)[i], "dims[" + std::to_string(i) + "]", 1);
                if (d > 3) rd.fail("dims[" + std::to_string(i) + "]", "must be 1, 2 or 3");
                c.dims.push_back(static_cast<int>(d));
            }
    }

    // Powers.
    const bool many_p = K == ExperimentKind::lambda || K == ExperimentKind::estimate_p;
    if (const json* p = rd.find(root, "p")) {
        c.p = rd.numbers(*p, "p", 1, true);
        if (!many_p && c.p.size() != 1) rd.fail("p", "must be a single number for " + to_string(K));
        // A lambda sweep keeps out-of-range powers as failing rows instead.
        if (K != ExperimentKind::lambda)
            for (double v : c.p)
                if (!(v > 2.0 / c.dim))
                    rd.fail("p", "must exceed 2/dim = " + fmt(2.0 / c.dim) + " (got " + fmt(v) + ")");
    } else {
        rd.fail("p", "required");
    }
    if (const json* q = rd.find(root, "quad_tol")) c.quad_tol = rd.positive(*q, "quad_tol");

    // Grid and solve.
    c.policy = inverse::GridPolicy::for_dim(c.dim);
    const json* grid = rd.find(root, "grid");
    const json* solve = rd.find(root, "solve");
    if (grid && !grid->is_object()) rd.fail("grid", "must be an object");
    if (solve && !solve->is_object()) rd.fail("solve", "must be an object");
    if (scaled) {
        if (grid && grid->is_object()) {
            for (const auto& [key, v] : grid->items()) {
                if (key == "points") c.policy.points = static_cast<int>(rd.integer(v, "grid.points", 8));
                else if (key == "width_factor") c.policy.width_factor = rd.positive(v, "grid.width_factor");
                else rd.fail("grid." + key, "unknown field (sigma-scaled experiments use points, width_factor)");
            }
            if (c.policy.points % 2 != 0) rd.fail("grid.points", "must be even");
        }
        if (solve && solve->is_object()) {
            for (const auto& [key, v] : solve->items()) {
                if (key == "horizon_factor") c.policy.horizon_factor = rd.positive(v, "solve.horizon_factor");
                else if (key == "step_factor") c.policy.step_factor = rd.positive(v, "solve.step_factor");
                else if (key == "certificate_tol") c.scattering.certificate_tol = rd.positive(v, "solve.certificate_tol");
                else if (key == "strichartz_factor") c.scattering.strichartz_factor = rd.positive(v, "solve.strichartz_factor");
                else if (key == "mass_drift_tol") c.scattering.mass_drift_tol = rd.positive(v, "solve.mass_drift_tol");
                else rd.fail("solve." + key, "unknown field");
            }
        }
        if (c.policy.step_factor > 0.0 && c.policy.horizon_factor > 0.0 &&
            !divides(c.policy.step_factor, c.policy.horizon_factor))
            rd.fail("solve.step_factor", "solve.step_factor = " + fmt(c.policy.step_factor) +
                                             " does not divide solve.horizon_factor = " + fmt(c.policy.horizon_factor));
    } else if (K == ExperimentKind::convergence) {
        if (!grid) rd.fail("grid", "required (points, half_width)");
        else if (grid->is_object()) {
            for (const auto& [key, v] : grid->items()) {
                if (key == "points") c.fixed_grid.points = static_cast<int>(rd.integer(v, "grid.points", 8));
                else if (key == "half_width") c.fixed_grid.half_width = rd.positive(v, "grid.half_width");
                else rd.fail("grid." + key, "unknown field (convergence uses points, half_width)");
            }
            if (c.fixed_grid.points % 2 != 0) rd.fail("grid.points", "must be even");
        }
        if (!solve) rd.fail("solve", "required (T, dt)");
        else if (solve->is_object()) {
            const json* T = rd.find(*solve, "T");
            const json* dt = rd.find(*solve, "dt");
            for (const auto& [key, _] : solve->items())
                if (key != "T" && key != "dt") rd.fail("solve." + key, "unknown field");
            if (!T) rd.fail("solve.T", "required");
            else c.T = rd.positive(*T, "solve.T");
            if (!dt) rd.fail("solve.dt", "required");
            else c.dts = rd.numbers(*dt, "solve.dt", 3, true);
            for (std::size_t i = 0; i < c.dts.size(); ++i)
                if (T && c.T > 0.0 && c.dts[i] > 0.0 && !divides(c.dts[i], c.T))
                    rd.fail("solve.dt", "solve.dt[" + std::to_string(i) + "] = " + fmt(c.dts[i]) +
                                            " does not divide solve.T = " + fmt(c.T));
        }
    } else {
        if (grid) rd.fail("grid", "not used by " + to_string(K));
        if (solve) rd.fail("solve", "not used by " + to_string(K));
    }

    // Coefficient and perturbation.
    const bool needs_coeff = K != ExperimentKind::lambda && K != ExperimentKind::estimate_p;
    if (const json* co = rd.find(root, "coefficient")) {
        c.coefficient = rd.coefficient(*co, "coefficient", c.dim, c.seed);
        if (K == ExperimentKind::estimate_p && (!c.coefficient.is_constant() || c.coefficient.constant() != 1.0))
            rd.fail("coefficient", "estimate-p runs the pure power map; coefficient must be the constant 1");
    } else if (needs_coeff) {
        rd.fail("coefficient", "required");
    }
    if (K == ExperimentKind::stability) {
        if (const json* g = rd.find(root, "perturbation")) c.perturbation = rd.coefficient(*g, "perturbation", c.dim, c.seed + 1);
        else rd.fail("perturbation", "required");
        if (const json* h = rd.find(root, "h")) c.h_values = rd.numbers(*h, "h", 1, true);
        else rd.fail("h", "required");
    } else {
        if (rd.find(root, "perturbation")) rd.fail("perturbation", "only used by stability");
        if (rd.find(root, "h")) rd.fail("h", "only used by stability");
    }

    // Probes.
    if (K != ExperimentKind::lambda) {
        const json* pr = rd.find(root, "probes");
        if (!pr || !pr->is_object()) {
            rd.fail("probes", "required (sigmas, centers)");
        } else {
            if (const json* s = rd.find(*pr, "sigmas")) {
                const std::size_t need =
                    (K == ExperimentKind::approx_id || K == ExperimentKind::born_gap) ? 3 : 1;
                c.sigmas = rd.numbers(*s, "probes.sigmas", need, true);
            } else {
                rd.fail("probes.sigmas", "required");
            }
            if (const json* ce = rd.find(*pr, "centers")) c.centers = rd.points(*ce, "probes.centers", c.dim);
            else c.centers = {Point{0.0, 0.0, 0.0}};
            for (const auto& [key, _] : pr->items())
                if (key != "sigmas" && key != "centers") rd.fail("probes." + key, "unknown field");
        }
    }
    if (K == ExperimentKind::stability) {
        c.family.dim = c.dim;
        c.family.sigmas = c.sigmas;
        c.family.centers = c.centers;
        if (const json* f = rd.find(root, "family")) {
            if (const json* s = rd.find(*f, "sigmas")) c.family.sigmas = rd.numbers(*s, "family.sigmas", 1, true);
            if (const json* ce = rd.find(*f, "centers")) c.family.centers = rd.points(*ce, "family.centers", c.dim);
            if (const json* t = rd.find(*f, "trusted_half_width"))
                c.family.trusted_half_width = rd.positive(*t, "family.trusted_half_width");
        }
        if (rd.errors.empty())
            for (const auto& v : inverse::family_violations(c.family)) rd.fail("family", v);
    } else if (rd.find(root, "family")) {
        rd.fail("family", "only used by stability");
    }

    // Thresholds.
    auto& th = c.thresholds;
    if (K == ExperimentKind::approx_id) th.min_slope = 5.2;
    if (K == ExperimentKind::born_gap) th.min_slope = 6.5;
    if (const json* t = rd.find(root, "thresholds")) {
        if (!t->is_object()) {
            rd.fail("thresholds", "must be an object");
        } else {
            for (const auto& [key, v] : t->items()) {
                const std::string p = "thresholds." + key;
                if (key == "max_rel_diff") th.max_rel_diff = rd.positive(v, p);
                else if (key == "min_slope") th.min_slope = rd.number(v, p);
                else if (key == "max_sup_error") th.max_sup_error = rd.positive(v, p);
                else if (key == "max_power_error") th.max_power_error = rd.positive(v, p);
                else if (key == "track_tol") th.track_tol = rd.positive(v, p);
                else if (key == "ratio_lo") th.ratio_lo = rd.positive(v, p);
                else if (key == "ratio_hi") th.ratio_hi = rd.positive(v, p);
                else if (key == "max_mass_drift") th.max_mass_drift = rd.positive(v, p);
                else if (key == "max_duhamel") th.max_duhamel = rd.positive(v, p);
                else rd.fail(p, "unknown field");
            }
        }
    }

    // Output.
    const json* out = rd.find(root, "output");
    const json* dir = out ? rd.find(*out, "dir") : nullptr;
    if (!dir || !dir->is_string() || dir->get<std::string>().empty()) {
        rd.fail("output.dir", "required, a directory path");
    } else {
        std::filesystem::path p = dir->get<std::string>();
        c.output_dir = p.is_absolute() ? p : base_dir / p;
        check_writable(rd, c.output_dir);
    }

    if (!rd.errors.empty()) throw ConfigError(rd.errors);

    json canon = root;
    canon.erase("workers");
    canon.erase("output");
    c.canonical = canon.dump();
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError({"cannot open " + path.string()});
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), std::filesystem::absolute(path).parent_path());
}

void set_output_dir(ExperimentConfig& config, const std::filesystem::path& dir) {
    Reader rd;
    const auto abs = std::filesystem::absolute(dir);
    check_writable(rd, abs);
    if (!rd.errors.empty()) throw ConfigError(rd.errors);
    config.output_dir = abs;
}

std::uint64_t config_hash(const ExperimentConfig& config) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : config.canonical) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace scatrec::harness
