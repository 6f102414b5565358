#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bregman/bregman.hpp"
#include "bregman/equilibrium.hpp"
#include "bregman/errors.hpp"
#include "bregman/region.hpp"
#include "bregman/solver.hpp"
#include "bregman/verify.hpp"

namespace py = pybind11;
using namespace bregman;

namespace {

Vector vec(const std::vector<double>& v) { return make_vector(std::span<const double>(v)); }
std::vector<double> list(const Vector& v) { return to_std(v); }

Region build_region(const GmepProblem& p, const std::vector<std::pair<std::vector<double>, double>>& cuts)
{
    Region r(p.base);
    for (const auto& [a, b] : cuts) r.add_cut(Halfspace(vec(a), b));
    return r;
}

py::dict run_solver(const std::vector<double>& x0, const std::string& variant, const std::string& problem,
                    const std::string& legendre, double tol, std::int64_t max_iter, std::int64_t trace_every)
{
    const GmepProblem p = make_problem(problem);
    SolverConfig cfg;
    cfg.variant = parse_variant(variant);
    cfg.tol = tol;
    cfg.max_iter = max_iter;
    cfg.trace_every = trace_every;
    const HybridSolver solver(LegendreFunction::parse(legendre, p.dim()), p, FixedPointMap{}, Schedule{}, cfg);
    RunResult r;
    {
        py::gil_scoped_release release;
        r = solver.run(vec(x0));
    }
    py::list trace;
    for (const auto& t : r.trace)
        trace.append(py::make_tuple(t.n, list(t.x), t.step_norm, t.d_x0, t.d_sol ? py::cast(*t.d_sol) : py::none(),
                                    t.fp_residual));
    py::dict out;
    out["result"] = list(r.result);
    out["iterations"] = r.iterations;
    out["status"] = to_string(r.status);
    out["final_step"] = r.final_step;
    out["final_fp_residual"] = r.final_fp_residual;
    out["trace"] = trace;
    return out;
}

}  // namespace

PYBIND11_MODULE(bregman_hybrid, m)
{
    m.doc() = "Bregman hybrid shrinking-projection solver";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<InfeasibleRegionError>(m, "InfeasibleRegionError", PyExc_RuntimeError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
    py::register_exception<InvariantError>(m, "InvariantError", PyExc_RuntimeError);

    py::class_<LegendreFunction>(m, "Legendre")
        .def(py::init([](const std::string& tag, std::size_t dim) { return LegendreFunction::parse(tag, dim); }),
             py::arg("tag"), py::arg("dim") = 1)
        .def_property_readonly("tag", &LegendreFunction::tag)
        .def_property_readonly("dim", &LegendreFunction::dim)
        .def("value", [](const LegendreFunction& f, const std::vector<double>& x) { return f.value(vec(x)); })
        .def("grad", [](const LegendreFunction& f, const std::vector<double>& x) { return list(f.grad(vec(x))); })
        .def("conj_value", [](const LegendreFunction& f, const std::vector<double>& u) { return f.conj_value(vec(u)); })
        .def("grad_conj",
             [](const LegendreFunction& f, const std::vector<double>& u) { return list(f.grad_conj(vec(u))); })
        .def("__repr__", [](const LegendreFunction& f) { return "Legendre('" + f.tag() + "', " + std::to_string(f.dim()) + ")"; });

    m.def(
        "bregman_distance",
        [](const LegendreFunction& f, const std::vector<double>& x, const std::vector<double>& y) {
            return bregman_distance(f, vec(x), vec(y));
        },
        py::arg("f"), py::arg("x"), py::arg("y"));

    m.def(
        "cut_from_distance_test",
        [](const LegendreFunction& f, const std::vector<double>& u, const std::vector<double>& x0,
           const std::vector<double>& xn, double alpha) {
            const Halfspace h = cut_from_distance_test(f, vec(u), vec(x0), vec(xn), alpha);
            return std::make_pair(list(h.a), h.b);
        },
        py::arg("f"), py::arg("u"), py::arg("x0"), py::arg("xn"), py::arg("alpha"));

    m.def(
        "project",
        [](const LegendreFunction& f, const std::string& problem,
           const std::vector<std::pair<std::vector<double>, double>>& cuts, const std::vector<double>& x) {
            return list(bregman_project(f, build_region(make_problem(problem), cuts), vec(x)));
        },
        py::arg("f"), py::arg("problem"), py::arg("cuts"), py::arg("x"),
        "Bregman projection of x onto C cut by the halfspaces <a, z> <= b.");

    m.def(
        "resolvent",
        [](const LegendreFunction& f, const std::string& problem, const std::vector<double>& x,
           const std::string& method) {
            ResolventConfig cfg;
            cfg.method = parse_resolvent_method(method);
            return list(resolvent(f, make_problem(problem), vec(x), cfg));
        },
        py::arg("f"), py::arg("problem"), py::arg("x"), py::arg("method") = "automatic");

    m.def("solve", &run_solver, py::arg("x0"), py::arg("variant") = "gmep", py::arg("problem") = "paper-example-gmep",
          py::arg("legendre") = "euclidean", py::arg("tol") = 1e-10, py::arg("max_iter") = 10'000'000,
          py::arg("trace_every") = 10'000,
          "Run the hybrid iteration from x0. Returns result, iterations, status and the decimated trace.");

    m.def(
        "verify",
        [](std::optional<std::vector<std::string>> only, std::uint64_t seed, int samples, double inject_fault) {
            VerifyOptions opts;
            opts.seed = seed;
            opts.samples = samples;
            opts.resolvent_fault = inject_fault;
            py::list out;
            for (const auto& r : run_properties(only.value_or(std::vector<std::string>{}), !only, opts)) {
                py::dict d;
                d["name"] = r.name;
                d["samples"] = r.samples;
                d["worst"] = r.worst;
                d["threshold"] = r.threshold;
                d["passed"] = r.pass;
                d["detail"] = r.detail;
                out.append(d);
            }
            return out;
        },
        py::arg("only") = py::none(), py::arg("seed") = VerifyOptions{}.seed, py::arg("samples") = 1000,
        py::arg("inject_fault") = 0.0);
}
