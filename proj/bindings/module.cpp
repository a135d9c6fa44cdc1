// Python bindings: a thin slice of the toolkit for scripting and plotting —
// lattices, admissibility profiles, loop norms, orbit solves, and the verify
// suites.  Heavy objects stay opaque; reports come back as plain dicts/lists.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "floerlab/fredholm.hpp"
#include "floerlab/io.hpp"

namespace py = pybind11;
using namespace floerlab;

namespace {

py::dict report_dict(const VerificationReport& r) {
    py::dict d;
    d["suite"] = r.suite;
    d["norm_pair"] = r.norm_pair;
    d["pass"] = r.pass;
    py::list cases;
    for (const auto& c : r.cases) {
        py::dict cd;
        cd["label"] = c.label;
        cd["value"] = c.value;
        cd["bound"] = c.bound;
        cd["margin"] = c.margin;
        cd["pass"] = c.pass;
        cases.append(cd);
    }
    d["cases"] = cases;
    py::dict metrics;
    for (const auto& m : r.metrics) metrics[py::str(m.first)] = m.second;
    d["metrics"] = metrics;
    if (r.trend.valid) {
        py::dict t;
        t["slope"] = r.trend.slope;
        t["r2"] = r.trend.r2;
        d["trend"] = t;
    }
    return d;
}

}  // namespace

PYBIND11_MODULE(_floerlab, m) {
    m.doc() = "spectral-Galerkin toolkit core";
    m.attr("__version__") = FLOERLAB_VERSION;

    py::enum_<ModelKind>(m, "ModelKind")
        .value("wave", ModelKind::wave)
        .value("schrodinger", ModelKind::schrodinger);

    py::class_<ModelSpec>(m, "ModelSpec")
        .def(py::init<>())
        .def_readwrite("kind", &ModelSpec::kind)
        .def_readwrite("a", &ModelSpec::a)
        .def_readwrite("N", &ModelSpec::N)
        .def_readwrite("T", &ModelSpec::T)
        .def_readwrite("h", &ModelSpec::h)
        .def_readwrite("h_prime", &ModelSpec::h_prime)
        .def_readwrite("k", &ModelSpec::k)
        .def("d", &ModelSpec::d)
        .def("validate", &ModelSpec::validate);

    py::class_<ModeSet>(m, "ModeSet")
        .def_readonly("theta", &ModeSet::theta)
        .def("__len__", &ModeSet::size);

    m.def("build_lattice", &build_lattice, py::arg("spec"), py::arg("n_max"));
    m.def("small_divisor", &small_divisor, py::arg("lam"), py::arg("T"));

    m.def(
        "admissibility_profile",
        [](const ModelSpec& spec, const ModeSet& modes, const std::vector<double>& h_values) {
            SpectrumReport r = admissibility_profile(spec, modes, h_values);
            py::dict d;
            d["lambda"] = r.lambda;
            d["eps"] = r.eps;
            d["theta"] = r.theta;
            d["fitted_h0"] = r.fitted_h0;
            d["fitted_h0_stderr"] = r.fitted_h0_stderr;
            d["fit_r2"] = r.fit_r2;
            d["h0_floor"] = r.h0_floor;
            d["resonant"] = r.resonant;
            d["admissible"] = r.admissible;
            py::list shells;
            for (const auto& s : r.shells)
                if (!s.empty) shells.append(py::make_tuple(s.j, s.theta_at_min, s.eps_min));
            d["shells"] = shells;
            return d;
        },
        py::arg("spec"), py::arg("modes"), py::arg("h_values") = std::vector<double>{});

    py::class_<CouplingSpec>(m, "CouplingSpec")
        .def(py::init<>())
        .def_readwrite("kappa", &CouplingSpec::kappa)
        .def_readwrite("atan_amp", &CouplingSpec::atan_amp)
        .def_static("linear", &CouplingSpec::linear, py::arg("kappa"));

    py::class_<OrbitContext>(m, "OrbitContext")
        .def_property_readonly("dim", [](const OrbitContext& c) { return c.basis.dim(); })
        .def("phase_dim", &OrbitContext::phase_dim);

    m.def("make_context", &make_context, py::arg("spec"), py::arg("n_max"), py::arg("m_max"),
          py::arg("coupling"), py::arg("sigma"));

    py::class_<Orbit>(m, "Orbit")
        .def_readonly("x", &Orbit::x)
        .def_readonly("residual_norm", &Orbit::residual_norm)
        .def_readonly("iterations", &Orbit::iterations)
        .def_readonly("converged", &Orbit::converged);

    m.def("newton_orbit", &newton_orbit, py::arg("ctx"), py::arg("init"), py::arg("tol"),
          py::arg("max_iter"), py::arg("k"), py::arg("h_prime"));

    m.def(
        "loop_norms",
        [](const OrbitContext& ctx, const Eigen::VectorXd& xi, int k, double hp) {
            return py::make_tuple(loop_norm_standard(ctx.basis, xi, k, hp),
                                  loop_norm_modified(ctx.basis, xi, k, hp));
        },
        py::arg("ctx"), py::arg("xi"), py::arg("k"), py::arg("h_prime"));

    m.def(
        "verify_isometry",
        [](const OrbitContext& ctx, int k, double hp, int samples, unsigned seed) {
            return report_dict(verify_isometry(ctx, k, hp, samples, seed));
        },
        py::arg("ctx"), py::arg("k"), py::arg("h_prime"), py::arg("samples") = 200,
        py::arg("seed") = 1u);

    m.def(
        "verify_inclusions",
        [](const OrbitContext& ctx, int k, double h, double hp, std::vector<double> hpp) {
            return report_dict(verify_inclusions(ctx, k, h, hp, hpp));
        },
        py::arg("ctx"), py::arg("k"), py::arg("h"), py::arg("h_prime"),
        py::arg("h_pp_grid") = std::vector<double>{0.5, 1.0});
}
