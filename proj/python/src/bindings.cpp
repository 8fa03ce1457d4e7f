#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fnirenberg/census.hpp"
#include "fnirenberg/constants.hpp"
#include "fnirenberg/driver.hpp"
#include "fnirenberg/error.hpp"
#include "fnirenberg/expr.hpp"
#include "fnirenberg/flow.hpp"
#include "fnirenberg/geometry.hpp"
#include "fnirenberg/interaction.hpp"

namespace py = pybind11;
using namespace fnir;

namespace {

SpherePoint point(const Vector& v) { return SpherePoint(v); }

py::dict constants_dict(const Constants& c) {
    py::dict d;
    d["n"] = c.n;
    d["sigma"] = c.sigma;
    d["c0"] = c.c0;
    d["mode"] = std::string(mode_name(c.mode));
    d["c1"] = c.c1;
    d["c1_tilde"] = c.c1_tilde;
    d["c1_tilde_paper_header"] = c.c1_tilde_paper_header;
    d["c1_tilde_proof_step"] = c.c1_tilde_proof_step;
    d["c2"] = c.c2;
    d["c5"] = c.c5;
    d["c_n_sigma"] = c.c_n_sigma;
    d["max_quadrature_gap"] = c.max_quadrature_gap;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Core routines of fnirenberg";
    m.attr("__version__") = std::string(kToolVersion);

    static py::exception<Error> exc(m, "FnirError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object inst = py::handle(exc.ptr())(e.what());
            inst.attr("kind") = std::string(kind_name(e.kind()));
            PyErr_SetObject(exc.ptr(), inst.ptr());
        }
    });

    m.def("geodesic_distance", [](const Vector& a, const Vector& b) { return geodesic_distance(point(a), point(b)); });
    m.def("green_kernel", [](const Vector& a, const Vector& b, int n, double sigma) {
        return green_kernel(point(a), point(b), n, sigma);
    }, py::arg("a"), py::arg("b"), py::arg("n"), py::arg("sigma"));
    m.def("stereographic", [](const Vector& x) { return stereographic(x).coords(); });
    m.def("stereographic_inv", [](const Vector& p) { return stereographic_inv(point(p)); });

    m.def("evaluate", [](const std::string& src, const Vector& x) { return parse_expression(src).evaluate(x); },
          py::arg("expr"), py::arg("x"));
    m.def("canonical_expression", [](const std::string& src) { return parse_expression(src).print(); });

    m.def("lanczos_gamma", &lanczos_gamma);
    m.def("radial_integral", &radial_integral, py::arg("n"), py::arg("p"));
    m.def("moment_integral", &moment_integral, py::arg("n"), py::arg("alpha"), py::arg("p"));
    m.def("build_constants", [](int n, double sigma, double c0, const std::string& mode) {
        return constants_dict(build_constants(n, sigma, c0, parse_mode(mode)));
    }, py::arg("n"), py::arg("sigma"), py::arg("c0") = 1.0, py::arg("mode") = "proof-step");

    m.def("smallest_eigenvalue", [](const Matrix& a) { return jacobi_eigenvalues(a)[0]; });
    m.def("eigenvalues", [](const Matrix& a) { return jacobi_eigenvalues(a); });
    m.def("subset_sum_closed_form", [](const std::vector<int>& s) { return subset_sum_closed_form(s); });

    m.def("critical_points", [](const std::string& expr, int n, std::size_t n_starts, std::uint64_t seed) {
        SearchOptions so;
        so.n_starts = n_starts;
        so.seed = seed;
        std::vector<Vector> out;
        for (const SpherePoint& p : find_critical_points(parse_expression(expr), n, so).points) out.push_back(p.coords());
        return out;
    }, py::arg("expr"), py::arg("n"), py::arg("n_starts") = 500, py::arg("seed") = 42);
    m.def("fit_flatness", [](const std::string& expr, const Vector& y, std::uint64_t frame_seed) {
        const CriticalPoint cp = fitted_critical_point(parse_expression(expr), point(y), frame_seed, default_radii(),
                                                       0.05, 1e-5);
        return py::make_tuple(cp.beta, cp.b, cp.fit_residual);
    }, py::arg("expr"), py::arg("y"), py::arg("frame_seed") = 0);

    m.def("certify_json", [](const std::string& problem) {
        const CertifyResult r = certify(parse_problem(json::parse(problem)));
        return py::make_tuple(r.report.dump(), r.exit_code);
    }, py::arg("problem"), "Runs the certify pipeline on a problem document; returns (report JSON, exit code).");
    m.def("flow_json", [](const std::string& problem, const std::string& initial) {
        const ProblemSpec spec = parse_problem(json::parse(problem));
        const FlowRunResult r = flow_cmd(spec, parse_initial(json::parse(initial), spec.n));
        return r.report.dump();
    }, py::arg("problem"), py::arg("initial"));
}
