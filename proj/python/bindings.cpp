#include "chebgap/asymptotics.hpp"
#include "chebgap/comb.hpp"
#include "chebgap/errors.hpp"
#include "chebgap/experiment.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <limits>

namespace py = pybind11;
using namespace chebgap;

namespace {

RealFiniteGapSet set_from_pairs(const std::vector<std::pair<double, double>>& pairs) {
    std::vector<Interval> iv;
    iv.reserve(pairs.size());
    for (const auto& [lo, hi] : pairs)
        iv.push_back({lo, hi});
    return make_set(std::move(iv));
}

std::vector<std::pair<double, double>> pairs_of(std::span<const Interval> iv) {
    std::vector<std::pair<double, double>> out;
    for (const auto& i : iv)
        out.emplace_back(i.lo, i.hi);
    return out;
}

py::dict row_dict(const DiagnosticsRow& r) {
    py::dict d;
    d["n"] = r.n;
    d["t_n"] = r.t_n;
    d["log_t_n"] = r.log_t_n;
    d["widom_factor"] = r.widom_factor;
    d["f_norm"] = r.f_norm;
    d["f_norm_gap_zeros"] = r.f_norm_gap_zeros;
    d["ratio"] = r.ratio;
    d["sup_deviation"] = r.sup_deviation;
    d["h_residual"] = r.h_residual;
    d["cert_pass"] = r.cert_pass;
    d["mass_defect"] = r.mass_defect;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Chebyshev polynomials, equilibrium measures and Widom minimizers on finite-gap sets";

    auto base = py::register_exception<Error>(m, "ChebgapError", PyExc_RuntimeError);
    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
    py::register_exception<CapabilityError>(m, "CapabilityError", base.ptr());
    py::register_exception<InvariantError>(m, "InvariantError", base.ptr());

    py::class_<RealFiniteGapSet>(m, "RealFiniteGapSet")
        .def_property_readonly("bands", [](const RealFiniteGapSet& s) { return pairs_of(s.bands()); })
        .def_property_readonly("gaps", [](const RealFiniteGapSet& s) { return pairs_of(s.gaps()); })
        .def("__contains__", [](const RealFiniteGapSet& s, double x) { return s.contains(x); })
        .def("__repr__", [](const RealFiniteGapSet& s) {
            return "RealFiniteGapSet(" + py::repr(py::cast(pairs_of(s.bands()))).cast<std::string>() + ")";
        });

    m.def("make_set", &set_from_pairs, py::arg("intervals"),
          "Normalized set from a list of (lo, hi) pairs.");

    py::class_<EquilibriumData>(m, "Equilibrium")
        .def_property_readonly("set", &EquilibriumData::set, py::return_value_policy::reference_internal)
        .def_property_readonly("capacity", &EquilibriumData::capacity)
        .def_property_readonly("log_capacity", &EquilibriumData::log_capacity)
        .def_property_readonly("critical_points", [](const EquilibriumData& e) {
            auto c = e.critical_points();
            return std::vector<double>(c.begin(), c.end());
        })
        .def_property_readonly("band_measures", [](const EquilibriumData& e) {
            auto b = e.band_measures();
            return std::vector<double>(b.begin(), b.end());
        })
        .def_property_readonly("pw_sum", [](const EquilibriumData& e) { return pw_sum(e); })
        .def("green", &EquilibriumData::green_real, py::arg("x"))
        .def("green_two", [](const EquilibriumData& e, double z, double w) { return green_two(e, z, w); },
             py::arg("z"), py::arg("w"))
        .def("density", &EquilibriumData::density, py::arg("x"))
        .def("cumulative_measure", &EquilibriumData::cumulative_measure, py::arg("x"));

    m.def("solve_equilibrium", &solve_equilibrium, py::arg("set"), py::arg("tol") = 1e-9);

    py::class_<ChebyshevSolution>(m, "ChebyshevSolution")
        .def_readonly("n", &ChebyshevSolution::n)
        .def_readonly("t_n", &ChebyshevSolution::t_n)
        .def_readonly("log_t_n", &ChebyshevSolution::log_t_n)
        .def_readonly("iterations", &ChebyshevSolution::iterations)
        .def_readonly("gap_zeros", &ChebyshevSolution::gap_zeros)
        .def_property_readonly("zeros", &ChebyshevSolution::zeros)
        .def_property_readonly("alternation", [](const ChebyshevSolution& s) {
            std::vector<std::pair<double, int>> out;
            for (const auto& p : s.alternation)
                out.emplace_back(p.x, p.sign);
            return out;
        })
        .def("coefficients", [](const ChebyshevSolution& s) { return s.poly.monomial_coefficients(); },
             "Monomial coefficients c_0..c_n.")
        .def("__call__", [](const ChebyshevSolution& s, double x) { return s.poly(x); })
        .def("certificate", [](const ChebyshevSolution& s, const RealFiniteGapSet& set) {
            return alternation_certificate(s, set).pass;
        });

    m.def(
        "chebyshev",
        [](const EquilibriumData& eq, std::size_t n, double tol) {
            RemezOptions o;
            o.tol = tol;
            return chebyshev(eq.set(), eq, n, o);
        },
        py::arg("eq"), py::arg("n"), py::arg("tol") = 1e-12);

    py::class_<WidomSolution>(m, "WidomSolution")
        .def_property_readonly("gap_points", [](const WidomSolution& w) { return w.gap_set.points(); })
        .def_readonly("f_norm", &WidomSolution::f_norm)
        .def_readonly("b_infinity", &WidomSolution::b_infinity)
        .def_property_readonly("character", [](const WidomSolution& w) { return w.character.entries; });

    m.def(
        "widom",
        [](const EquilibriumData& eq, const std::map<std::size_t, double>& points) {
            return widom_from_gap_set(eq, GapSet::make(eq.set(), points));
        },
        py::arg("eq"), py::arg("gap_points"), "Widom minimizer for a gap set {gap index: x}.");
    m.def(
        "character_match",
        [](const EquilibriumData& eq, const std::vector<double>& target) {
            return solve_character_match(eq, CharacterVector{target});
        },
        py::arg("eq"), py::arg("character"));
    m.def("widom_minimizer_n", &widom_minimizer_n, py::arg("eq"), py::arg("sol"));

    m.def(
        "diagnostics",
        [](const EquilibriumData& eq, std::size_t n_min, std::size_t n_max) {
            auto rep = convergence_report(eq, n_min, n_max);
            py::list rows;
            for (const auto& r : rep.rows)
                rows.append(row_dict(r));
            py::dict trend;
            trend["window"] = rep.trend.window;
            trend["first_median"] = rep.trend.first_median;
            trend["last_median"] = rep.trend.last_median;
            trend["log_slope"] = rep.trend.log_slope;
            py::dict out;
            out["rows"] = rows;
            out["trend"] = trend;
            return out;
        },
        py::arg("eq"), py::arg("n_min"), py::arg("n_max"));
    m.def("h_n_check", [](const EquilibriumData& eq, const ChebyshevSolution& s, double z) {
        return h_n_check(eq, s, z).residual;
    });

    m.def(
        "comb",
        [](const EquilibriumData& eq, long long q_max) {
            auto p = comb_parameters(eq);
            auto g = canonical_generator_scan(eq, q_max);
            py::dict d;
            d["omegas"] = p.omegas;
            d["heights"] = p.heights;
            d["relation_found"] = g.relation_found;
            d["coefficients"] = g.coefficients;
            d["integer"] = g.integer;
            d["searched_bound"] = g.searched_bound;
            d["verdict"] = g.verdict;
            return d;
        },
        py::arg("eq"), py::arg("q_max") = 1000);

    m.def(
        "run",
        [](const std::string& config_text, const std::string& output) {
            auto cfg = parse_config(config_text);
            if (!output.empty())
                cfg.output = output;
            RunResult res;
            {
                py::gil_scoped_release nogil;
                res = run_experiment(cfg, config_text);
            }
            py::list rows;
            for (const auto& r : res.rows)
                rows.append(row_dict(r));
            py::dict d;
            d["exit_code"] = static_cast<int>(res.code);
            d["message"] = res.message;
            d["rows"] = rows;
            return d;
        },
        py::arg("config_text"), py::arg("output") = "",
        "Runs a JSON config; returns the exit code, message and diagnostics rows.");
}
