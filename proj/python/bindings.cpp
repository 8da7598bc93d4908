#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "multdim/cli_support.hpp"
#include "multdim/counterexample.hpp"
#include "multdim/estimate.hpp"
#include "multdim/exponents.hpp"
#include "multdim/fourier.hpp"
#include "multdim/geometry.hpp"
#include "multdim/version.hpp"

namespace py = pybind11;
using namespace multdim;

namespace {

RangeUse parse_use(const std::string& s) {
    if (s == "linear") return RangeUse::Linear;
    if (s == "multiplicative") return RangeUse::Multiplicative;
    throw std::invalid_argument("use must be 'linear' or 'multiplicative'");
}

ExponentKind parse_kind(const std::string& s) {
    if (s == "lambda") return ExponentKind::Lambda;
    if (s == "tau") return ExponentKind::Tau;
    if (s == "d") return ExponentKind::D;
    throw std::invalid_argument("kind must be 'lambda', 'tau', or 'd'");
}

const char* verdict_name(SeriesVerdict v) {
    switch (v) {
        case SeriesVerdict::Convergent: return "convergent";
        case SeriesVerdict::Divergent: return "divergent";
        case SeriesVerdict::SlowDecay: return "slow-decay";
        case SeriesVerdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

py::dict exponent_result_dict(const ExponentResult& r) {
    py::dict d;
    d["value"] = r.value;
    d["lo"] = r.lo;
    d["hi"] = r.hi;
    d["method"] = r.method;
    return d;
}

}  // namespace

PYBIND11_MODULE(_multdim, m) {
    m.doc() = "multiplicative diophantine approximation toolkit";
    m.attr("__version__") = kVersion;

    py::class_<IndexSet>(m, "IndexSet")
        .def_static("parse", &parse_index_set, py::arg("descriptor"))
        .def("contains", &IndexSet::contains)
        .def("up_to", &IndexSet::up_to);

    py::class_<ApproxFunction>(m, "ApproxFunction")
        .def_static(
            "power",
            [](double tau, const std::string& use) {
                return ApproxFunction::power(tau, parse_use(use));
            },
            py::arg("tau"), py::arg("use") = "multiplicative")
        .def_static(
            "reciprocal",
            [](const std::string& use) { return ApproxFunction::reciprocal(parse_use(use)); },
            py::arg("use") = "linear")
        .def_static(
            "table",
            [](const std::map<std::uint64_t, std::string>& values, const std::string& use) {
                std::map<std::uint64_t, Rational> vals;
                for (const auto& [q, v] : values) vals[q] = rational_from_string(v);
                return ApproxFunction::table(std::move(vals), parse_use(use));
            },
            py::arg("values"), py::arg("use") = "multiplicative")
        .def_static("parse", &parse_psi, py::arg("descriptor"))
        .def("__call__", &ApproxFunction::operator())
        .def("raw", &ApproxFunction::raw)
        .def("sqrt",
             [](const ApproxFunction& f, const std::string& use) {
                 return f.sqrt(parse_use(use));
             },
             py::arg("use") = "linear")
        .def_property_readonly("tau", &ApproxFunction::tau)
        .def_property_readonly("support_min", &ApproxFunction::support_min)
        .def("to_json", [](const ApproxFunction& f) { return f.to_json().dump(); });

    m.def(
        "exponent",
        [](const std::string& kind, const ApproxFunction& psi, const std::string& q_set) {
            return exponent_result_dict(exponent_of_convergence(
                parse_kind(kind), psi, parse_index_set(q_set)));
        },
        py::arg("kind"), py::arg("psi"), py::arg("q_set") = "naturals");

    m.def(
        "dimension_formulas",
        [](const ApproxFunction& psi, const std::string& q_set) {
            const auto f = dimension_formulas(psi, parse_index_set(q_set));
            py::dict d;
            d["lambda"] = f.lambda;
            d["tau"] = f.tau;
            d["d"] = f.d;
            d["dimF_W"] = f.dimF_W;
            d["dimF_M"] = f.dimF_M;
            d["dimH_M"] = f.dimH_M;
            d["salem_gap"] = f.salem_gap;
            d["khintchine_convergent"] = f.khintchine_convergent;
            d["gallagher_convergent"] = f.gallagher_convergent;
            d["applicable"] = f.gallagher_convergent;
            d["warning"] = f.warning;
            return d;
        },
        py::arg("psi"), py::arg("q_set") = "naturals");

    m.def("star_measure", &star_measure, py::arg("psi_q"));

    m.def(
        "cover_check",
        [](std::uint64_t q, double psi_q, std::uint64_t samples, std::uint64_t seed) {
            const auto r = cover_check(q, psi_q, samples, seed);
            py::dict d;
            d["samples"] = r.samples;
            d["covered"] = r.covered;
            d["escaped"] = r.escaped;
            return d;
        },
        py::arg("q"), py::arg("psi_q"), py::arg("samples") = 10000, py::arg("seed") = 1);

    m.def(
        "dyadic_index_range",
        [](std::uint64_t q, double psi_q) {
            const auto r = dyadic_index_range(q, psi_q);
            return py::make_tuple(r.j_lo, r.j_hi);
        },
        py::arg("q"), py::arg("psi_q"));

    m.def(
        "rect_fourier_coeff",
        [](std::uint64_t q, int j, double psi_q, std::int64_t n1, std::int64_t n2) {
            return rect_fourier_coeff(q, j, psi_q, {n1, n2});
        },
        py::arg("q"), py::arg("j"), py::arg("psi_q"), py::arg("n1"), py::arg("n2"));

    m.def(
        "coeff_bound",
        [](std::uint64_t q, int j, double psi_q, std::int64_t n1, std::int64_t n2) {
            return coeff_bound(q, j, psi_q, {n1, n2});
        },
        py::arg("q"), py::arg("j"), py::arg("psi_q"), py::arg("n1"), py::arg("n2"));

    m.def(
        "quadratic_bound",
        [](std::uint64_t q, double psi_q, double s, std::uint64_t kmax) {
            const auto b = quadratic_bound_sum(q, psi_q, s, kmax);
            py::dict d;
            d["omega0"] = b.omega0;
            d["omega1"] = b.omega1;
            d["omega2"] = b.omega2;
            d["t11"] = b.t11;
            d["t12"] = b.t12;
            d["t21"] = b.t21;
            d["t22"] = b.t22;
            d["total"] = b.total;
            d["tail"] = b.tail_estimate;
            d["kmax"] = b.kmax;
            d["levels"] = b.levels;
            return d;
        },
        py::arg("q"), py::arg("psi_q"), py::arg("s"), py::arg("kmax") = 0);

    m.def("quadratic_bound_rhs", &quadratic_bound_rhs, py::arg("q"), py::arg("psi_q"),
          py::arg("s"), py::arg("eps"));

    m.def(
        "build_construction",
        [](int levels, const std::string& mode, std::uint64_t budget) {
            ConstructionConfig cfg;
            cfg.levels = levels;
            cfg.prime_budget = budget;
            if (mode == "exact") cfg.mode = ConstructionMode::Exact;
            else if (mode == "scaled") cfg.mode = ConstructionMode::Scaled;
            else throw std::invalid_argument("mode must be 'exact' or 'scaled'");
            return construction_to_json(build_construction(cfg)).dump();
        },
        py::arg("levels") = 1, py::arg("mode") = "scaled", py::arg("budget") = 2000000,
        "Returns the construction summary as a JSON string.");

    m.def(
        "monte_carlo_star_measure",
        [](std::uint64_t q, double psi_q, std::uint64_t samples, std::uint64_t seed,
           int threads) {
            const StarDomain dom{q, psi_q};
            const auto r = monte_carlo_measure(
                [&](const TorusPoint2& p) { return dom.contains(p); }, samples, seed, threads);
            return py::make_tuple(r.mean, r.stderr_);
        },
        py::arg("q"), py::arg("psi_q"), py::arg("samples") = 100000, py::arg("seed") = 1,
        py::arg("threads") = 1);

    m.def(
        "box_counting_limsup",
        [](const ApproxFunction& psi, std::uint64_t qmax,
           const std::vector<std::uint64_t>& resolutions, const std::string& q_set) {
            const auto r = box_counting_limsup(psi, parse_index_set(q_set), qmax, resolutions);
            py::dict d;
            d["resolutions"] = r.resolutions;
            d["counts"] = r.counts;
            d["slope"] = r.slope;
            d["residual"] = r.residual;
            return d;
        },
        py::arg("psi"), py::arg("qmax"), py::arg("resolutions"),
        py::arg("q_set") = "naturals");

    m.def(
        "borel_cantelli_verdicts",
        [](const ApproxFunction& psi, std::uint64_t qmax, const std::string& q_set) {
            const auto r = borel_cantelli_sums(psi, parse_index_set(q_set), qmax);
            return py::make_tuple(verdict_name(r.measure_verdict),
                                  verdict_name(r.gallagher_verdict));
        },
        py::arg("psi"), py::arg("qmax") = 65536, py::arg("q_set") = "naturals");

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::vector<std::string> full = args;
            full.insert(full.begin(), "multdim");
            std::vector<const char*> argv;
            for (const auto& a : full) argv.push_back(a.c_str());
            return run_cli(static_cast<int>(argv.size()), argv.data());
        },
        py::arg("args"), "Invoke the command-line dispatcher in-process.");
}
