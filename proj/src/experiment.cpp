#include "chebgap/experiment.hpp"

#include "chebgap/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace chebgap {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr std::size_t kMaxDegree = 60;

// thresholds of the invariant suites
constexpr double kHResidualMax = 1e-6;
constexpr double kMassDefectMax = 1e-8;
constexpr double kCrossMax = 1e-6;
constexpr double kRatioSlack = 1e-8;

double positive(const json& j, const char* key, double fallback) {
    if (!j.contains(key))
        return fallback;
    if (!j[key].is_number())
        throw ValidationError(std::string("tolerances.") + key + " must be a number");
    const double v = j[key].get<double>();
    if (!(v > 0.0))
        throw ValidationError(std::string("tolerances.") + key + " must be positive");
    return v;
}

std::size_t count(const json& j, const char* what) {
    if (!j.is_number_integer() || j.get<long long>() < 0)
        throw ValidationError(std::string(what) + " must be a nonnegative integer");
    return j.get<std::size_t>();
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + p.string());
    out << text;
}

std::string solution_name(std::size_t n) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "n_%03zu.json", n);
    return buf;
}

json gap_points_json(const std::map<std::size_t, double>& pts) {
    json a = json::array();
    for (const auto& [k, x] : pts)
        a.push_back({{"gap", k}, {"x", x}});
    return a;
}

json solution_record(const EquilibriumData& eq, const ChebyshevSolution& sol,
                     const DiagnosticsRow& row) {
    json r;
    r["n"] = sol.n;
    r["t_n"] = sol.t_n;
    r["log_t_n"] = sol.log_t_n;
    r["iterations"] = sol.iterations;
    r["zeros"] = sol.zeros();
    json alt = json::array();
    for (const auto& p : sol.alternation)
        alt.push_back({{"x", p.x}, {"sign", p.sign}, {"value", p.value}});
    r["alternation"] = alt;
    r["gap_zeros"] = gap_points_json(gap_zeros(sol, eq.set()));
    const auto w = widom_minimizer_n(eq, sol);
    r["f_norm_gap_zeros"] = row.f_norm_gap_zeros;
    r["widom"] = {{"gap_points", gap_points_json(w.gap_set.points())},
                  {"b_infinity", w.b_infinity},
                  {"f_norm", w.f_norm},
                  {"character", w.character.entries}};
    r["widom_factor"] = row.widom_factor;
    r["ratio"] = row.ratio;
    r["sup_deviation"] = row.sup_deviation;
    r["h_residual"] = row.h_residual;
    r["cert_pass"] = row.cert_pass;
    r["mass_defect"] = row.mass_defect;
    json bs = json::array();
    for (const auto& b : bands(sol).bands)
        bs.push_back({{"lo", b.lo()}, {"hi", b.hi()}, {"mass", b.mass}});
    r["bands"] = bs;
    return r;
}

ExitCode code_of(const std::exception_ptr& e, std::string& what) {
    try {
        std::rethrow_exception(e);
    } catch (const ValidationError& x) {
        what = x.what();
        return ExitCode::validation;
    } catch (const InvariantError& x) {
        what = x.what();
        return ExitCode::invariant;
    } catch (const std::exception& x) {
        what = x.what();
        return ExitCode::numerical;
    }
}

struct PerN {
    std::optional<DiagnosticsRow> row;
    json record;
    std::exception_ptr error;
};

} // namespace

ExperimentConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object())
        throw ValidationError("config must be a JSON object");
    static const std::vector<std::string> known = {
        "set",  "n_range", "tolerances",         "grid",     "output",     "cross_validate_up_to",
        "comb", "comb_q_max", "almost_period_eps", "seed", "threads"};
    for (const auto& [key, _] : j.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ValidationError("unknown config key '" + key + "'");

    ExperimentConfig c;
    if (!j.contains("set") || !j["set"].is_array() || j["set"].empty())
        throw ValidationError("'set' must be a nonempty list of [lo, hi] pairs");
    for (const auto& iv : j["set"]) {
        if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number() || !iv[1].is_number())
            throw ValidationError("each interval must be a [lo, hi] pair of numbers");
        c.intervals.push_back({iv[0].get<double>(), iv[1].get<double>()});
    }
    (void)make_set(c.intervals); // overlap and ordering checks

    if (!j.contains("n_range") || !j["n_range"].is_array() || j["n_range"].size() != 2)
        throw ValidationError("'n_range' must be [n_min, n_max]");
    c.n_min = count(j["n_range"][0], "n_min");
    c.n_max = count(j["n_range"][1], "n_max");
    if (c.n_min < 1)
        throw ValidationError("n_min must be at least 1");
    if (c.n_max < c.n_min)
        throw ValidationError("n_max must not be below n_min");
    if (c.n_max > kMaxDegree)
        throw ValidationError("n_max above the precision cap " + std::to_string(kMaxDegree));

    if (j.contains("tolerances")) {
        const auto& t = j["tolerances"];
        if (!t.is_object())
            throw ValidationError("'tolerances' must be an object");
        c.equilibrium_tol = positive(t, "equilibrium", c.equilibrium_tol);
        c.remez_tol = positive(t, "remez", c.remez_tol);
        c.quadrature_tol = positive(t, "quadrature", c.quadrature_tol);
        if (c.equilibrium_tol > 1e-4)
            throw ValidationError("tolerances.equilibrium must be at most 1e-4");
        if (c.remez_tol >= 1e-2)
            throw ValidationError("tolerances.remez must be below 1e-2");
    }
    if (j.contains("grid")) {
        const auto& g = j["grid"];
        if (g.is_string()) {
            if (g.get<std::string>() != "default")
                throw ValidationError("'grid' must be \"default\" or a list of numbers");
        } else if (g.is_array()) {
            for (const auto& x : g) {
                if (!x.is_number())
                    throw ValidationError("grid entries must be numbers");
                c.grid.push_back(x.get<double>());
            }
        } else {
            throw ValidationError("'grid' must be \"default\" or a list of numbers");
        }
    }
    if (j.contains("output")) {
        if (!j["output"].is_string() || j["output"].get<std::string>().empty())
            throw ValidationError("'output' must be a nonempty path string");
        c.output = j["output"].get<std::string>();
    }
    if (j.contains("cross_validate_up_to")) {
        c.cross_validate_up_to = count(j["cross_validate_up_to"], "cross_validate_up_to");
        if (c.cross_validate_up_to > 8)
            throw ValidationError("cross_validate_up_to must be at most 8");
    }
    if (j.contains("comb")) {
        if (!j["comb"].is_boolean())
            throw ValidationError("'comb' must be true or false");
        c.comb = j["comb"].get<bool>();
    }
    if (j.contains("comb_q_max")) {
        c.comb_q_max = static_cast<long long>(count(j["comb_q_max"], "comb_q_max"));
        if (c.comb_q_max < 1 || c.comb_q_max > 10000)
            throw ValidationError("comb_q_max must lie in [1, 10000]");
    }
    if (j.contains("almost_period_eps") && !j["almost_period_eps"].is_null()) {
        if (!j["almost_period_eps"].is_number() || !(j["almost_period_eps"].get<double>() > 0.0))
            throw ValidationError("almost_period_eps must be a positive number or null");
        c.almost_period_eps = j["almost_period_eps"].get<double>();
    }
    if (j.contains("seed"))
        c.seed = count(j["seed"], "seed");
    if (j.contains("threads"))
        c.threads = static_cast<unsigned>(count(j["threads"], "threads"));
    return c;
}

ExperimentConfig load_config(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ValidationError("cannot read config " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string diagnostics_csv(const std::vector<DiagnosticsRow>& rows) {
    std::string s = "# chebgap diagnostics schema " + std::to_string(kCsvSchemaVersion) + "\n";
    s += "n,log10_t_n,W_n,f_norm,ratio,sup_deviation,h_residual,cert_pass\n";
    for (const auto& r : rows) {
        s += std::to_string(r.n) + "," + fmt17(r.log_t_n / std::log(10.0)) + "," +
             fmt17(r.widom_factor) + "," + fmt17(r.f_norm) + "," + fmt17(r.ratio) + "," +
             fmt17(r.sup_deviation) + "," + fmt17(r.h_residual) + "," +
             (r.cert_pass ? "1" : "0") + "\n";
    }
    return s;
}

RunResult run_experiment(const ExperimentConfig& config, const std::string& config_text) {
    RunResult res;
    json manifest;
    manifest["version"] = kVersion;
    manifest["csv_schema"] = kCsvSchemaVersion;
    manifest["seed"] = config.seed;
    json errors = json::array();

    if (config.output.empty()) {
        res.code = ExitCode::validation;
        res.message = "config has no 'output' directory";
        return res;
    }
    fs::create_directories(config.output / "solutions");
    write_file(config.output / "config.json", config_text);

    auto finish = [&](ExitCode code, const std::string& msg) {
        res.code = code;
        res.message = msg;
        manifest["status"] = static_cast<int>(code);
        manifest["message"] = msg;
        manifest["errors"] = errors;
        manifest["rows_written"] = res.rows.size();
        write_file(config.output / "manifest.json", manifest.dump(2) + "\n");
        return res;
    };

    std::optional<EquilibriumData> eq;
    try {
        eq.emplace(solve_equilibrium(make_set(config.intervals), config.equilibrium_tol));
    } catch (...) {
        std::string what;
        const auto code = code_of(std::current_exception(), what);
        errors.push_back({{"stage", "equilibrium"}, {"what", what}});
        return finish(code, "equilibrium: " + what);
    }
    const auto& r = eq->residuals();
    manifest["equilibrium_residuals"] = {{"gap_conditions", r.gap_conditions},
                                         {"normalization", r.normalization},
                                         {"max_green_on_set", r.max_green_on_set},
                                         {"capacity_routes", r.capacity_routes}};
    manifest["capacity"] = eq->capacity();
    manifest["pw_sum"] = pw_sum(*eq);

    DiagnosticsOptions opt;
    if (!config.grid.empty())
        opt.grid = config.grid;
    opt.remez.tol = config.remez_tol;
    opt.remez.max_degree = kMaxDegree;
    opt.quad_tol = config.quadrature_tol;

    // per-n pipeline; results land in fixed slots, so the order of work
    // does not affect the output
    const std::size_t count_n = config.n_max - config.n_min + 1;
    std::vector<PerN> slots(count_n);
    std::vector<std::optional<CrossValidation>> cross(count_n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count_n; i = next++) {
            const std::size_t n = config.n_min + i;
            try {
                const auto sol = chebyshev(eq->set(), *eq, n, opt.remez);
                const auto row = diagnostics_row(*eq, sol, opt);
                slots[i].record = solution_record(*eq, sol, row);
                slots[i].row = row;
                if (n <= config.cross_validate_up_to)
                    cross[i] = cross_validate_en(sol, config.cross_validate_up_to);
            } catch (...) {
                slots[i].error = std::current_exception();
            }
        }
    };
    unsigned threads = config.threads ? config.threads : std::thread::hardware_concurrency();
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count_n)));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t)
        pool.emplace_back(worker);
    worker();
    for (auto& t : pool)
        t.join();

    ExitCode code = ExitCode::ok;
    std::string first_error;
    for (std::size_t i = 0; i < count_n; ++i) {
        const std::size_t n = config.n_min + i;
        if (slots[i].error) {
            std::string what;
            const auto c = code_of(slots[i].error, what);
            errors.push_back({{"stage", "n"}, {"n", n}, {"what", what}});
            if (code == ExitCode::ok) {
                code = c;
                first_error = "n = " + std::to_string(n) + ": " + what;
            }
            continue;
        }
        res.rows.push_back(*slots[i].row);
        write_file(config.output / "solutions" / solution_name(n), slots[i].record.dump(2) + "\n");
    }
    write_file(config.output / "diagnostics.csv", diagnostics_csv(res.rows));

    // invariant suites
    auto suite = [&](std::string name, bool pass, std::string detail) {
        res.suites.push_back({std::move(name), pass, std::move(detail)});
    };
    double worst_h = 0.0, worst_mass = 0.0, ratio_max = 0.0, ratio_min = 1e300;
    double w_min = 1e300, w_max = 0.0;
    std::size_t cert_fail = 0;
    for (const auto& row : res.rows) {
        worst_h = std::max(worst_h, row.h_residual);
        worst_mass = std::max(worst_mass, row.mass_defect);
        ratio_max = std::max(ratio_max, row.ratio);
        ratio_min = std::min(ratio_min, row.ratio);
        w_min = std::min(w_min, row.widom_factor);
        w_max = std::max(w_max, row.widom_factor);
        cert_fail += !row.cert_pass;
    }
    const double upper = 2.0 * std::exp(pw_sum(*eq));
    if (!res.rows.empty()) {
        suite("widom_bounds", w_min >= 2.0 - 1e-8 && w_max <= upper + 1e-8,
              "W_n in [" + fmt17(w_min) + ", " + fmt17(w_max) + "], bounds [2, " + fmt17(upper) + "]");
        suite("alternation_certificates", cert_fail == 0,
              std::to_string(cert_fail) + " failures");
        suite("h_n_representation", worst_h <= kHResidualMax, "max residual " + fmt17(worst_h));
        suite("band_masses", worst_mass <= kMassDefectMax,
              "max |mass - 1/n| " + fmt17(worst_mass));
        suite("ratio_range", ratio_min > 0.0 && ratio_max <= 2.0 + kRatioSlack,
              "ratio in [" + fmt17(ratio_min) + ", " + fmt17(ratio_max) + "]");
    }
    if (config.cross_validate_up_to > 0) {
        double cap = 0.0, green = 0.0;
        std::size_t used = 0;
        for (const auto& c : cross)
            if (c) {
                cap = std::max(cap, c->capacity_diff);
                green = std::max(green, c->green_diff);
                ++used;
            }
        suite("cross_validation_en", cap <= kCrossMax && green <= kCrossMax,
              std::to_string(used) + " degrees, capacity " + fmt17(cap) + ", green " + fmt17(green));
    }
    for (const auto& s : res.suites)
        if (!s.pass && code == ExitCode::ok) {
            code = ExitCode::invariant;
            first_error = "suite " + s.name + " failed: " + s.detail;
        }

    std::ostringstream summary;
    summary << "set:";
    for (const auto& iv : config.intervals)
        summary << " [" << fmt17(iv.lo) << ", " << fmt17(iv.hi) << "]";
    summary << "\nn range: " << config.n_min << ".." << config.n_max << " (" << res.rows.size()
            << " rows)\n";
    summary << "capacity: " << fmt17(eq->capacity()) << "\nPW sum: " << fmt17(pw_sum(*eq)) << "\n\n";
    for (const auto& s : res.suites)
        summary << (s.pass ? "PASS " : "FAIL ") << s.name << ": " << s.detail << "\n";

    const auto trend = trend_statistics(res.rows, opt.trend_window, opt.trend_n_min);
    summary << "\ntrend (n >= " << opt.trend_n_min << ", window " << trend.window
            << "): sup_deviation median " << fmt17(trend.first_median) << " -> "
            << fmt17(trend.last_median) << ", log slope " << fmt17(trend.log_slope) << " over "
            << trend.rows_used << " rows\n";
    manifest["trend"] = {{"window", trend.window},
                         {"n_min", opt.trend_n_min},
                         {"first_median", trend.first_median},
                         {"last_median", trend.last_median},
                         {"log_slope", trend.log_slope},
                         {"rows_used", trend.rows_used}};

    if (config.almost_period_eps) {
        bool consecutive = res.rows.size() >= 20;
        for (std::size_t i = 1; consecutive && i < res.rows.size(); ++i)
            consecutive = res.rows[i].n == res.rows[i - 1].n + 1;
        if (consecutive) {
            const auto periods = almost_period_probe(res.rows, *config.almost_period_eps);
            summary << "almost periods (eps " << *config.almost_period_eps << "):";
            for (auto p : periods)
                summary << " " << p;
            summary << (periods.empty() ? " none" : "") << "\n";
            if (!periods.empty())
                summary << "f_norm has period-" << periods.front() << " structure\n";
            manifest["almost_periods"] = periods;
        } else {
            summary << "almost-period probe skipped: needs 20 consecutive rows\n";
        }
    }

    if (config.comb) {
        const auto cp = comb_parameters(*eq);
        const auto scan = canonical_generator_scan(*eq, config.comb_q_max);
        json comb = {{"omegas", cp.omegas},
                     {"heights", cp.heights},
                     {"band_measures", band_measures(*eq)},
                     {"scan", {{"relation_found", scan.relation_found},
                               {"coefficients", scan.coefficients},
                               {"integer", scan.integer},
                               {"residual", scan.residual},
                               {"searched_bound", scan.searched_bound},
                               {"verdict", scan.verdict}}}};
        write_file(config.output / "comb.json", comb.dump(2) + "\n");
        summary << "comb: " << scan.verdict << "\n";
    }

    summary << "\nstatus: " << static_cast<int>(code)
            << (code == ExitCode::ok ? " ok" : " " + first_error) << "\n";
    write_file(config.output / "summary.txt", summary.str());
    return finish(code, code == ExitCode::ok ? "ok" : first_error);
}

std::string show_solution(const fs::path& run_dir, std::size_t n) {
    const auto p = run_dir / "solutions" / solution_name(n);
    std::ifstream in(p, std::ios::binary);
    if (!in)
        throw ValidationError("no solution record " + p.string());
    json r;
    try {
        r = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("corrupt solution record " + p.string() + ": " + e.what());
    }
    char buf[160];
    std::ostringstream os;
    os << "n = " << r["n"].get<std::size_t>() << "\n";
    std::snprintf(buf, sizeof buf, "t_n = %.15g  (log t_n = %.15g)\n", r["t_n"].get<double>(),
                  r["log_t_n"].get<double>());
    os << buf;
    std::snprintf(buf, sizeof buf, "W_n = %.15g\n", r["widom_factor"].get<double>());
    os << buf;
    os << "alternation points (" << r["alternation"].size() << "):\n";
    for (const auto& a : r["alternation"]) {
        std::snprintf(buf, sizeof buf, "  x = %+.15f  sign %+d  T = %+.6e\n", a["x"].get<double>(),
                      a["sign"].get<int>(), a["value"].get<double>());
        os << buf;
    }
    if (r["gap_zeros"].empty())
        os << "gap zeros: none\n";
    for (const auto& g : r["gap_zeros"]) {
        std::snprintf(buf, sizeof buf, "gap zero in gap %zu: %.15g\n", g["gap"].get<std::size_t>(),
                      g["x"].get<double>());
        os << buf;
    }
    std::snprintf(buf, sizeof buf, "||F_n|| = %.15g\nratio W_n/||F_n|| = %.15g\n",
                  r["widom"]["f_norm"].get<double>(), r["ratio"].get<double>());
    os << buf;
    return os.str();
}

} // namespace chebgap
