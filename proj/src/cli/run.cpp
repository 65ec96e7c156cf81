#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qhsim/cli.hpp"
#include "qhsim/dynamics.hpp"
#include "qhsim/metric.hpp"
#include "qhsim/model.hpp"
#include "qhsim/scan.hpp"

namespace qhsim::cli {

using nlohmann::json;

namespace {

json matrix_json(const Matrix& m) {
    json re = json::array(), im = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json rr = json::array(), ri = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            rr.push_back(m(i, j).real());
            ri.push_back(m(i, j).imag());
        }
        re.push_back(rr);
        im.push_back(ri);
    }
    return {{"re", re}, {"im", im}};
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

Matrix matrix_from_json(const json& v, const std::string& what) {
    auto read = [&](const json& rows) {
        if (!rows.is_array() || rows.empty()) throw UsageError(what + ": expected a non-empty matrix");
        const auto n = static_cast<Eigen::Index>(rows.size());
        Eigen::MatrixXd m(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const json& row = rows[static_cast<std::size_t>(i)];
            if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
                throw UsageError(what + ": expected a square matrix");
            for (Eigen::Index j = 0; j < n; ++j) {
                if (!row[static_cast<std::size_t>(j)].is_number()) throw UsageError(what + ": non-numeric entry");
                m(i, j) = row[static_cast<std::size_t>(j)].get<double>();
            }
        }
        return m;
    };
    if (v.is_object()) {
        if (!v.contains("re")) throw UsageError(what + ": object form needs 're'");
        const Eigen::MatrixXd re = read(v.at("re"));
        Matrix m = re.cast<cplx>();
        if (v.contains("im")) {
            const Eigen::MatrixXd im = read(v.at("im"));
            if (im.rows() != re.rows()) throw UsageError(what + ": re/im size mismatch");
            m += kI * im.cast<cplx>();
        }
        return m;
    }
    return read(v).cast<cplx>();
}

TaylorFamily load_family(const std::string& family) {
    if (family == "benchmark") return benchmark_family();
    std::ifstream in(family);
    if (!in) throw UsageError("family: '" + family + "' is neither 'benchmark' nor a readable file");
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("h0") || !j.contains("h1"))
        throw UsageError("family file must be a JSON object with h0 and h1");
    return {matrix_from_json(j.at("h0"), "h0"), matrix_from_json(j.at("h1"), "h1")};
}

MetricProfile profile_of(const RunConfig& config) {
    if (config.xi_mode == XiMode::MinimalProfile) {
        if (config.u0 == 1.0) return MetricProfile::minimal();
        const double u0 = config.u0;
        return {[u0](double) { return u0; }, [](double, double gamma) { return gamma; },
                "u=" + format_number(u0) + ", sin(xi)=gamma"};
    }
    return MetricProfile::constant(config.u0, config.xi0);
}

std::string csv_header(const RunConfig& config) { return "# config: " + canonical_dump(config_to_json(config)) + "\n"; }

std::string render_records(const RunConfig& config, const std::vector<ScanRecord>& records) {
    if (config.effective_format() == Format::Json) {
        json rows = json::array();
        for (const auto& r : records)
            rows.push_back({{"c", r.c},
                            {"t", r.t},
                            {"region", std::string(region_name(r.region))},
                            {"e_plus", complex_json(r.energy.e_plus)},
                            {"e_minus", complex_json(r.energy.e_minus)}});
        return canonical_dump({{"config", config_to_json(config)}, {"records", rows}}) + "\n";
    }
    std::string out = csv_header(config);
    out += "c,t,region,e_plus_re,e_plus_im,e_minus_re,e_minus_im\n";
    for (const auto& r : records) {
        out += format_number(r.c) + ',' + format_number(r.t) + ',' + std::string(region_name(r.region)) + ',' +
               format_number(r.energy.e_plus.real()) + ',' + format_number(r.energy.e_plus.imag()) + ',' +
               format_number(r.energy.e_minus.real()) + ',' + format_number(r.energy.e_minus.imag()) + '\n';
    }
    return out;
}

std::string render_evolve(const RunConfig& config) {
    Vector psi0(2);
    psi0 << cplx(config.psi0[0], config.psi0[1]), cplx(config.psi0[2], config.psi0[3]);
    CrossingOptions options;
    options.dt = config.dt;
    options.fd_step = config.fd_step;
    options.scheme = config.scheme;
    if (config.theta0) {
        Matrix theta(2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) theta(i, j) = (*config.theta0)[i][j];
        options.theta0 = theta;
    }
    const CrossingScan scan =
        crossing_scan(config.c, profile_of(config), psi0, config.window_start, config.window_end, options);

    if (config.effective_format() == Format::Json) {
        json columns = json::array();
        for (auto name : kCrossingColumns) columns.push_back(std::string(name));
        json rows = json::array();
        for (const auto& row : scan.rows) rows.push_back(json(std::vector<double>(row.begin(), row.end())));
        const auto& traj = scan.trajectory;
        return canonical_dump({{"config", config_to_json(config)},
                               {"columns", columns},
                               {"rows", rows},
                               {"interface_time", traj.interface_time ? json(*traj.interface_time) : json(nullptr)},
                               {"max_symmetrization", traj.max_symmetrization}}) +
               "\n";
    }
    std::string out = csv_header(config);
    for (std::size_t i = 0; i < kCrossingColumns.size(); ++i) {
        if (i) out += ',';
        out += kCrossingColumns[i];
    }
    out += '\n';
    for (const auto& row : scan.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_number(row[i]);
        }
        out += '\n';
    }
    return out;
}

std::string render_metric(const RunConfig& config) {
    const double gap = config.c - config.t * config.t;
    if (!(gap > 0.0) || gap >= 1.0)
        throw RegionError("metric needs (c, t) strictly inside the quasi-Hermitian domain t^2 < c < t^2 + 1");
    const double gamma = std::sqrt(gap);
    const double xi = config.xi_mode == XiMode::MinimalProfile ? std::asin(gamma) : config.xi0;
    const MetricParams params(gamma, config.u0, xi);
    const MetricMatrix theta = build_metric(params);
    const MatrixOperator h = hamiltonian_upper(ParameterPoint(config.c, config.t));
    const DysonMap omega = dyson_factor(theta, config.scheme);
    const MatrixOperator image = hermitian_image(h, omega);
    const auto [theta_plus, theta_minus] = metric_eigenvalues(params);
    const Eigen::VectorXd image_eigs =
        Eigen::SelfAdjointEigenSolver<Matrix>(0.5 * (image.matrix() + image.matrix().adjoint())).eigenvalues();
    const EnergyPair e = energies(ParameterPoint(config.c, config.t));
    const Matrix& w = omega.omega.matrix();

    json result{
        {"gamma", gamma},
        {"u", config.u0},
        {"xi", xi},
        {"theta", matrix_json(theta.matrix())},
        {"theta_eigenvalues", json::array({theta_plus, theta_minus})},
        {"dieudonne_residual", dieudonne_residual(h, theta.theta())},
        {"scheme", std::string(scheme_name(omega.scheme))},
        {"omega", matrix_json(w)},
        {"factorization_error", max_abs(w.adjoint() * w - theta.matrix())},
        {"hermitian_image", matrix_json(image.matrix())},
        {"hermitian_image_residual", hermiticity_residual(image.matrix())},
        {"hermitian_image_eigenvalues", json::array({image_eigs(0), image_eigs(1)})},
        {"energies", json::array({complex_json(e.e_plus), complex_json(e.e_minus)})},
    };
    return canonical_dump({{"config", config_to_json(config)}, {"metric", result}}) + "\n";
}

std::string render_perturb(const RunConfig& config) {
    const TaylorFamily family = load_family(config.family);
    const PerturbativeMetric pm = perturbative_metric(family);
    const std::vector<double> residuals = residual_order_scan(family, pm, config.gammas);
    json result{
        {"dim", family.dim()},
        {"k", matrix_json(pm.k)},
        {"gauge", pm.gauge},
        {"positivity_threshold", std::isfinite(pm.positivity_threshold) ? json(pm.positivity_threshold) : json(nullptr)},
        {"first_order_residual", first_order_residual(family, pm.k)},
        {"gammas", config.gammas},
        {"residuals", residuals},
    };
    return canonical_dump({{"config", config_to_json(config)}, {"perturb", result}}) + "\n";
}

json diagnostic(const char* kind, const std::string& message, int code) {
    return {{"status", "error"}, {"kind", kind}, {"message", message}, {"exit_code", code}};
}

}  // namespace

std::string render(const RunConfig& config) {
    switch (config.subcommand) {
        case Subcommand::PhaseDiagram: return render_records(config, phase_diagram(config.grid, config.boundary_tol));
        case Subcommand::Spectrum:
            return render_records(config, spectrum_scan(config.c, config.grid.t, config.boundary_tol));
        case Subcommand::Evolve: return render_evolve(config);
        case Subcommand::Metric: return render_metric(config);
        case Subcommand::Perturb: return render_perturb(config);
    }
    throw UsageError("unknown subcommand");
}

int run(const RunConfig& config, std::ostream& diagnostics) {
    std::string text;
    try {
        text = render(config);
    } catch (const NumericalError& e) {
        diagnostics << canonical_dump(diagnostic(e.kind(), e.what(), kExitNumerical)) << '\n';
        return kExitNumerical;
    } catch (const Error& e) {
        diagnostics << canonical_dump(diagnostic(e.kind(), e.what(), kExitUsage)) << '\n';
        return kExitUsage;
    }

    if (config.output == "-") {
        std::cout << text;
        std::cout.flush();
        if (!std::cout) {
            diagnostics << canonical_dump(diagnostic("IoError", "failed writing to stdout", kExitIo)) << '\n';
            return kExitIo;
        }
        return kExitOk;
    }
    std::ofstream out(config.output, std::ios::binary | std::ios::trunc);
    if (out) out << text;
    if (out) out.close();
    if (!out) {
        diagnostics << canonical_dump(diagnostic("IoError", "cannot write '" + config.output + "'", kExitIo)) << '\n';
        return kExitIo;
    }
    return kExitOk;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig config;
    try {
        config = parse_config(args);
    } catch (const HelpRequested& help) {
        out << help.what();
        return kExitOk;
    } catch (const UsageError& e) {
        err << canonical_dump(diagnostic(e.kind(), e.what(), kExitUsage)) << '\n';
        return kExitUsage;
    }
    return run(config, err);
}

}  // namespace qhsim::cli
