#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qhsim/dynamics.hpp"
#include "qhsim/errors.hpp"
#include "qhsim/metric.hpp"
#include "qhsim/model.hpp"
#include "qhsim/scan.hpp"

namespace py = pybind11;
using namespace qhsim;

namespace {

DysonScheme parse_scheme(const std::string& name) {
    if (auto s = scheme_from_name(name)) return *s;
    throw DomainError("unknown Dyson scheme '" + name + "'");
}

py::dict records_to_dict(const std::vector<ScanRecord>& records) {
    std::vector<double> c, t;
    std::vector<std::string> region;
    std::vector<cplx> e_plus, e_minus;
    for (const auto& r : records) {
        c.push_back(r.c);
        t.push_back(r.t);
        region.emplace_back(region_name(r.region));
        e_plus.push_back(r.energy.e_plus);
        e_minus.push_back(r.energy.e_minus);
    }
    py::dict d;
    d["c"] = py::array(py::cast(c));
    d["t"] = py::array(py::cast(t));
    d["region"] = region;
    d["e_plus"] = py::array(py::cast(e_plus));
    d["e_minus"] = py::array(py::cast(e_minus));
    return d;
}

MetricProfile make_profile(double u0, const std::string& xi_mode, double xi0) {
    if (xi_mode == "constant") return MetricProfile::constant(u0, xi0);
    if (xi_mode != "minimal-profile") throw DomainError("xi_mode must be minimal-profile or constant");
    if (!(u0 > 0.0)) throw DomainError("profile u0 must be positive");
    return {[u0](double) { return u0; }, [](double, double gamma) { return gamma; }, "sin(xi)=gamma"};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Quasi-Hermitian benchmark toolkit (C++ core)";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    auto input = py::register_exception<InputError>(m, "InputError", base.ptr());
    auto numerical = py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
    py::register_exception<RegionError>(m, "RegionError", input.ptr());
    py::register_exception<DomainError>(m, "DomainError", input.ptr());
    py::register_exception<DimensionError>(m, "DimensionError", input.ptr());
    py::register_exception<NotPositiveDefinite>(m, "NotPositiveDefinite", numerical.ptr());
    py::register_exception<SingularMap>(m, "SingularMap", numerical.ptr());
    py::register_exception<DegenerateObstruction>(m, "DegenerateObstruction", numerical.ptr());
    py::register_exception<StepTooLarge>(m, "StepTooLarge", numerical.ptr());
    py::register_exception<ProfileDomainError>(m, "ProfileDomainError", numerical.ptr());
    py::register_exception<PositivityLost>(m, "PositivityLost", numerical.ptr());

    // model
    m.def(
        "classify",
        [](double c, double t, double boundary_tol) {
            return std::string(region_name(classify(ParameterPoint(c, t), boundary_tol)));
        },
        py::arg("c"), py::arg("t"), py::arg("boundary_tol") = 0.0);
    m.def(
        "energies",
        [](double c, double t) {
            const EnergyPair e = energies(ParameterPoint(c, t));
            return py::make_tuple(e.e_plus, e.e_minus);
        },
        py::arg("c"), py::arg("t"));
    m.def(
        "hamiltonian_lower", [](double c, double t) { return hamiltonian_lower(ParameterPoint(c, t)).matrix(); },
        py::arg("c"), py::arg("t"));
    m.def(
        "hamiltonian_upper", [](double c, double t) { return hamiltonian_upper(ParameterPoint(c, t)).matrix(); },
        py::arg("c"), py::arg("t"));
    m.def("interface_times", &interface_times, py::arg("c"));
    m.def("exceptional_times", &exceptional_times, py::arg("c"));

    py::class_<TaylorFamily>(m, "TaylorFamily")
        .def(py::init<Matrix, Matrix>(), py::arg("h0"), py::arg("h1"))
        .def_property_readonly("dim", &TaylorFamily::dim)
        .def_property_readonly("h0", &TaylorFamily::h0)
        .def_property_readonly("h1", &TaylorFamily::h1)
        .def("eval", &TaylorFamily::eval, py::arg("gamma"));
    m.def("benchmark_family", &benchmark_family);

    // metric
    m.def(
        "build_metric",
        [](double gamma, double u, double xi) { return build_metric(MetricParams(gamma, u, xi)).matrix(); },
        py::arg("gamma"), py::arg("u"), py::arg("xi"));
    m.def(
        "metric_eigenvalues",
        [](double gamma, double u, double xi) { return metric_eigenvalues(MetricParams(gamma, u, xi)); },
        py::arg("gamma"), py::arg("u"), py::arg("xi"));
    m.def(
        "dieudonne_residual", [](const Matrix& h, const Matrix& theta) { return dieudonne_residual(h, theta); },
        py::arg("h"), py::arg("theta"));
    m.def(
        "dyson_factor",
        [](const Matrix& theta, const std::string& scheme) {
            return dyson_factor(theta, parse_scheme(scheme)).omega.matrix();
        },
        py::arg("theta"), py::arg("scheme") = "hermitian-sqrt");
    m.def(
        "hermitian_image",
        [](const Matrix& h, const Matrix& omega) {
            return hermitian_image(MatrixOperator(Role::HamiltonianUpper, h),
                                   DysonMap{MatrixOperator(Role::Dyson, omega), DysonScheme::HermitianSqrt})
                .matrix();
        },
        py::arg("h"), py::arg("omega"));
    m.def(
        "perturbative_metric",
        [](const TaylorFamily& family, double tol_deg) {
            const PerturbativeMetric pm = perturbative_metric(family, tol_deg);
            py::dict d;
            d["k"] = pm.k;
            d["gauge"] = pm.gauge;
            d["positivity_threshold"] = pm.positivity_threshold;
            d["residual"] = first_order_residual(family, pm.k);
            return d;
        },
        py::arg("family"), py::arg("tol_deg") = kDegeneracyTolerance);
    m.def(
        "residual_order_scan",
        [](const TaylorFamily& family, const Matrix& k, const std::vector<double>& gammas) {
            return residual_order_scan(family, PerturbativeMetric{k, "", 0.0}, gammas);
        },
        py::arg("family"), py::arg("k"), py::arg("gammas"));

    // dynamics
    m.def(
        "expectation", [](const Vector& psi, const Matrix& theta, const Matrix& q) { return expectation(psi, theta, q); },
        py::arg("psi"), py::arg("theta"), py::arg("q"));
    m.def(
        "evolve_state",
        [](const std::function<Matrix(double)>& g_fn, const Vector& psi0, double t0, double t1, double dt) {
            const StateSeries s = evolve_state(g_fn, psi0, t0, t1, dt);
            return py::make_tuple(s.times, s.states);
        },
        py::arg("g_fn"), py::arg("psi0"), py::arg("t0"), py::arg("t1"), py::arg("dt"));
    m.def(
        "run_crossing",
        [](double c, const Vector& psi0, double t_a, double t_b, double dt, double u0, const std::string& xi_mode,
           double xi0, const std::string& scheme) {
            CrossingOptions options;
            options.dt = dt;
            options.scheme = parse_scheme(scheme);
            const Trajectory traj = run_crossing(c, make_profile(u0, xi_mode, xi0), psi0, t_a, t_b, options);
            std::vector<Vector> states;
            for (const auto& s : traj.states) states.push_back(s.amplitudes);
            std::vector<cplx> e_plus;
            for (const auto& e : traj.energies) e_plus.push_back(e.e_plus);
            py::dict d;
            d["t"] = py::array(py::cast(traj.times));
            d["psi"] = py::array(py::cast(states));
            d["theta"] = traj.metrics;
            d["theta_norm"] = py::array(py::cast(traj.theta_norms));
            d["e_plus"] = py::array(py::cast(e_plus));
            d["expect_H"] = py::array(py::cast(traj.observables.at("H")));
            d["interface_time"] = traj.interface_time;
            return d;
        },
        py::arg("c"), py::arg("psi0"), py::arg("t_a"), py::arg("t_b"), py::arg("dt") = 1e-3, py::arg("u0") = 1.0,
        py::arg("xi_mode") = "minimal-profile", py::arg("xi0") = 0.0, py::arg("scheme") = "hermitian-sqrt");

    // scan
    m.def(
        "phase_diagram",
        [](double c_min, double c_max, std::size_t c_count, double t_min, double t_max, std::size_t t_count,
           double boundary_tol) {
            return records_to_dict(
                phase_diagram(GridSpec{{c_min, c_max, c_count}, {t_min, t_max, t_count}}, boundary_tol));
        },
        py::arg("c_min"), py::arg("c_max"), py::arg("c_count"), py::arg("t_min"), py::arg("t_max"),
        py::arg("t_count"), py::arg("boundary_tol") = 0.0);
    m.def(
        "spectrum_scan",
        [](double c, double t_min, double t_max, std::size_t count, double boundary_tol) {
            return records_to_dict(spectrum_scan(c, GridAxis{t_min, t_max, count}, boundary_tol));
        },
        py::arg("c"), py::arg("t_min"), py::arg("t_max"), py::arg("count"), py::arg("boundary_tol") = 0.0);
}
