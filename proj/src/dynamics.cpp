#include "qhsim/dynamics.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <string>
#include <unordered_map>

#include "qhsim/errors.hpp"
#include "qhsim/rk4.hpp"

namespace qhsim {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

Matrix checked_inverse(const Matrix& m) {
    Eigen::FullPivLU<Matrix> lu(m);
    lu.setThreshold(1e-13);
    if (!lu.isInvertible()) throw SingularMap("Dyson map is not invertible");
    return lu.inverse();
}

Matrix central_difference(const MatrixFn& f, double t, double h) {
    return (f(t + h) - f(t - h)) / (2.0 * h);
}

void require_square(const Matrix& m, Eigen::Index n, const char* what) {
    if (m.rows() != n || m.cols() != n)
        throw DimensionError(std::string(what) + ": expected " + std::to_string(n) + "x" + std::to_string(n) +
                             ", got " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

StateSeries integrate_ket(const MatrixFn& g_fn, const Vector& psi0, double t0, double t1, double dt, Basis basis) {
    StateSeries out;
    out.basis = basis;
    out.times = uniform_grid(t0, t1, dt);
    out.states.reserve(out.times.size());
    out.states.push_back(psi0);
    auto rhs = [&](double t, const Vector& psi) -> Vector {
        const Matrix g = g_fn(t);
        require_square(g, psi.size(), "generator");
        return -kI * (g * psi);
    };
    for (std::size_t i = 0; i + 1 < out.times.size(); ++i) {
        const double h = out.times[i + 1] - out.times[i];
        out.states.push_back(rk4_step(rhs, out.times[i], out.states.back(), h));
    }
    return out;
}

// The crossing generator is requested by both the ket and the metric
// integrators at identical stage times.
MatrixFn memoize(MatrixFn fn) {
    auto cache = std::make_shared<std::unordered_map<double, Matrix>>();
    return [fn = std::move(fn), cache](double t) -> Matrix {
        if (auto it = cache->find(t); it != cache->end()) return it->second;
        return cache->emplace(t, fn(t)).first->second;
    };
}

Matrix factor(const Matrix& theta, DysonScheme scheme) {
    return dyson_factor(theta, scheme).omega.matrix();
}

}  // namespace

GeneratorBundle make_generator(Matrix h, Matrix sigma) {
    if (h.rows() != sigma.rows() || h.cols() != sigma.cols()) throw DimensionError("generator: dimension mismatch");
    Matrix g = h - sigma;
    return {std::move(h), std::move(sigma), std::move(g)};
}

MatrixOperator sigma_of(const MatrixFn& omega_fn, double t, double fd_step, double tol) {
    if (!std::isfinite(t)) throw DomainError("sigma_of: t must be finite");
    const double h = fd_step > 0.0 ? fd_step : default_fd_step(t);
    const Matrix omega = omega_fn(t);
    const Matrix inv = checked_inverse(omega);
    const Matrix coarse = kI * inv * central_difference(omega_fn, t, h);
    const Matrix fine = kI * inv * central_difference(omega_fn, t, 0.5 * h);
    const double change = max_abs(coarse - fine);
    if (change > 10.0 * tol)
        throw StepTooLarge("sigma_of: halving the difference step changed Sigma by " + std::to_string(change));
    return {Role::Sigma, fine};
}

StateSeries evolve_state(const MatrixFn& g_fn, const Vector& psi0, double t0, double t1, double dt) {
    return integrate_ket(g_fn, psi0, t0, t1, dt, Basis::Ket);
}

StateSeries evolve_costate(const MatrixFn& gdag_fn, const Vector& psi_tilde0, double t0, double t1, double dt) {
    return integrate_ket(gdag_fn, psi_tilde0, t0, t1, dt, Basis::CurlyKet);
}

MetricSeries evolve_metric(const MatrixFn& g_fn, const Matrix& theta0, double t0, double t1, double dt) {
    require_square(theta0, theta0.rows(), "metric");
    MetricSeries out;
    out.times = uniform_grid(t0, t1, dt);
    out.thetas.reserve(out.times.size());

    auto lowest = [](const Matrix& theta) {
        return Eigen::SelfAdjointEigenSolver<Matrix>(theta, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
    };

    Matrix theta = 0.5 * (theta0 + theta0.adjoint());
    out.min_eigenvalue = lowest(theta);
    if (!(out.min_eigenvalue > 0.0)) throw NotPositiveDefinite("initial metric is not positive definite");
    out.thetas.push_back(theta);

    auto rhs = [&](double t, const Matrix& th) -> Matrix {
        const Matrix g = g_fn(t);
        require_square(g, th.rows(), "generator");
        return -kI * (g.adjoint() * th - th * g);
    };
    for (std::size_t i = 0; i + 1 < out.times.size(); ++i) {
        const double h = out.times[i + 1] - out.times[i];
        Matrix next = rk4_step(rhs, out.times[i], theta, h);
        const Matrix herm = 0.5 * (next + next.adjoint());
        out.max_symmetrization = std::max(out.max_symmetrization, max_abs(next - herm));
        theta = herm;
        const double low = lowest(theta);
        out.min_eigenvalue = std::min(out.min_eigenvalue, low);
        if (!(low > 0.0))
            throw PositivityLost("metric lost positivity at t=" + std::to_string(out.times[i + 1]) +
                                 " (min eigenvalue " + std::to_string(low) + ")");
        out.thetas.push_back(theta);
    }
    return out;
}

ObservableSeries evolve_observable(const Matrix& lambda0, const MatrixFn& generator_fn, double t0, double t1,
                                   double dt, HeisenbergVariant variant) {
    require_square(lambda0, lambda0.rows(), "observable");
    ObservableSeries out;
    out.times = uniform_grid(t0, t1, dt);
    out.values.reserve(out.times.size());
    out.values.push_back(variant == HeisenbergVariant::Adjoint ? Matrix(lambda0.adjoint()) : lambda0);

    auto rhs = [&](double t, const Matrix& x) -> Matrix {
        const Matrix s = generator_fn(t);
        require_square(s, x.rows(), "generator");
        switch (variant) {
            case HeisenbergVariant::Observable: return -kI * (x * s - s * x);
            case HeisenbergVariant::Adjoint: {
                const Matrix sd = s.adjoint();
                return -kI * (x * sd - sd * x);
            }
            case HeisenbergVariant::Hamiltonian: return -kI * (s * x - x * s);
        }
        return Matrix::Zero(x.rows(), x.cols());
    };
    for (std::size_t i = 0; i + 1 < out.times.size(); ++i) {
        const double h = out.times[i + 1] - out.times[i];
        out.values.push_back(rk4_step(rhs, out.times[i], out.values.back(), h));
    }
    return out;
}

cplx expectation(const Vector& psi, const Matrix& theta, const Matrix& q) {
    const auto n = psi.size();
    require_square(theta, n, "metric");
    require_square(q, n, "observable");
    return psi.dot(theta * (q * psi));
}

double theta_norm(const Vector& psi, const Matrix& theta) {
    require_square(theta, psi.size(), "metric");
    return psi.dot(theta * psi).real();
}

MetricProfile MetricProfile::minimal() {
    return {[](double) { return 1.0; }, [](double, double gamma) { return gamma; }, "u=1, sin(xi)=gamma"};
}

MetricProfile MetricProfile::constant(double u0, double xi0) {
    if (!(u0 > 0.0) || !std::isfinite(u0)) throw DomainError("profile u0 must be positive");
    if (!(xi0 >= 0.0) || !(xi0 < std::numbers::pi / 2)) throw DomainError("profile xi0 must lie in [0, pi/2)");
    const double s = std::sin(xi0);
    return {[u0](double) { return u0; }, [s](double, double) { return s; },
            "u=" + std::to_string(u0) + ", xi=" + std::to_string(xi0)};
}

Matrix profile_metric(const MetricProfile& profile, double t, double gamma) {
    return detail::metric_entries(gamma, profile.u(t), profile.sin_xi(t, gamma));
}

namespace {

void check_profile_at(const MetricProfile& profile, double t, double gamma) {
    const double u = profile.u(t);
    const double s = profile.sin_xi(t, gamma);
    if (!std::isfinite(u) || !(u > 0.0))
        throw ProfileDomainError("metric profile has u <= 0 at t=" + std::to_string(t));
    if (!std::isfinite(s) || s >= 1.0 || s * s - gamma * gamma < -8 * kEps || s < 0.0)
        throw ProfileDomainError("metric profile violates gamma <= sin(xi) < 1 at t=" + std::to_string(t) +
                                 " (gamma=" + std::to_string(gamma) + ", sin(xi)=" + std::to_string(s) + ")");
}

// Benchmark Hermitian segment. |t^2 - c| below the slack is treated as the
// interface so that a window ending at -sqrt(c) is accepted.
Matrix lower_at(double c, double t) {
    return detail::lower_matrix(std::sqrt(std::max(0.0, t * t - c)));
}

void append(Trajectory& traj, double t, const Vector& psi, const Matrix& theta, const Matrix& h, double c) {
    traj.times.push_back(t);
    traj.states.push_back({psi, Basis::Ket});
    traj.metrics.push_back(theta);
    traj.energies.push_back(energies(ParameterPoint(c, t)));
    traj.theta_norms.push_back(theta_norm(psi, theta));
    traj.observables["H"].push_back(expectation(psi, theta, h));
}

}  // namespace

GeneratorBundle profile_generator(double c, const MetricProfile& profile, double t, const CrossingOptions& options) {
    const double gap = c - t * t;
    if (!(gap > 0.0) || gap >= 1.0)
        throw RegionError("profile_generator needs a point strictly inside the quasi-Hermitian domain");
    const DysonScheme scheme = options.scheme;
    const MatrixFn omega_fn = [&](double tau) {
        return factor(profile_metric(profile, tau, std::sqrt(std::max(0.0, c - tau * tau))), scheme);
    };
    Matrix sigma = sigma_of(omega_fn, t, options.fd_step, options.sigma_tol).matrix();
    return make_generator(detail::upper_matrix(std::sqrt(gap)), std::move(sigma));
}

Trajectory conventional_evolve(double c, const Vector& psi0, double t0, double t1, double dt) {
    if (!std::isfinite(c)) throw DomainError("c must be finite");
    if (psi0.size() != 2) throw DimensionError("benchmark state must have two components");
    const double min_t2 = (t0 <= 0.0 && t1 >= 0.0) ? 0.0 : std::min(t0 * t0, t1 * t1);
    if (c > min_t2 + 64 * kEps * std::max(1.0, std::abs(c)))
        throw RegionError("conventional_evolve: window enters c > t^2");

    const StateSeries series = evolve_state([c](double t) { return lower_at(c, t); }, psi0, t0, t1, dt);
    Trajectory traj;
    const Matrix id = Matrix::Identity(2, 2);
    for (std::size_t i = 0; i < series.times.size(); ++i)
        append(traj, series.times[i], series.states[i], id, lower_at(c, series.times[i]), c);
    return traj;
}

Trajectory run_crossing(double c, const MetricProfile& profile, const Vector& psi0, double t_a, double t_b,
                        const CrossingOptions& options) {
    if (!std::isfinite(c) || !std::isfinite(t_a) || !std::isfinite(t_b))
        throw DomainError("run_crossing: inputs must be finite");
    if (!(t_b > t_a)) throw DomainError("run_crossing: window must satisfy t_a < t_b");
    if (psi0.size() != 2) throw DimensionError("benchmark state must have two components");

    const double root = c > 0.0 ? std::sqrt(c) : 0.0;
    const double t_interface = -root;
    if (c <= 0.0 || t_b <= t_interface) return conventional_evolve(c, psi0, t_a, t_b, options.dt);
    if (t_a >= t_interface)
        throw RegionError("run_crossing: window must start in the Hermitian regime (t_a < " +
                          std::to_string(t_interface) + ")");

    const double t_end_limit = c < 1.0 ? root : -std::sqrt(c - 1.0);
    if (t_b >= t_end_limit)
        throw RegionError(std::string("run_crossing: window reaches ") +
                          (c < 1.0 ? "the second interface" : "the exceptional point") + " at t=" +
                          std::to_string(t_end_limit));

    Trajectory traj = conventional_evolve(c, psi0, t_a, t_interface, options.dt);
    traj.interface_time = t_interface;

    // Quasi-Hermitian branch in sigma = sqrt(t - t_interface):
    //   t = t_interface + sigma^2,  gamma = sigma sqrt(2 sqrt(c) - sigma^2),
    // and i d/dsigma = 2 sigma H - Sigma_sigma with Sigma_sigma = i Omega^-1 dOmega/dsigma.
    const double span = t_b - t_interface;
    const double sigma_end = std::sqrt(span);
    const auto steps = std::max(1.0, std::ceil(span / options.dt - 1e-9));
    const double dsigma = sigma_end / steps;

    auto time_at = [t_interface](double s) { return t_interface + s * s; };
    auto gamma_at = [root](double s) { return s * std::sqrt(2.0 * root - s * s); };

    for (double s : uniform_grid(0.0, sigma_end, dsigma)) check_profile_at(profile, time_at(s), gamma_at(s));

    const DysonScheme scheme = options.scheme;
    const MatrixFn omega_fn = [&](double s) { return factor(profile_metric(profile, time_at(s), gamma_at(s)), scheme); };
    const MatrixFn g_fn = memoize([&](double s) -> Matrix {
        const Matrix sigma = sigma_of(omega_fn, s, options.fd_step, options.sigma_tol).matrix();
        return 2.0 * s * detail::upper_matrix(gamma_at(s)) - sigma;
    });

    const Matrix theta0 = options.theta0.value_or(Matrix::Identity(2, 2));
    require_square(theta0, 2, "interface metric");
    const Vector psi_interface = traj.states.back().amplitudes;

    const StateSeries kets = evolve_state(g_fn, psi_interface, 0.0, sigma_end, dsigma);
    const MetricSeries metrics = evolve_metric(g_fn, theta0, 0.0, sigma_end, dsigma);
    traj.max_symmetrization = metrics.max_symmetrization;

    // The interface node is already present from the Hermitian segment with
    // Theta = I; with a non-identity theta0 it is replaced.
    traj.times.pop_back();
    traj.states.pop_back();
    traj.metrics.pop_back();
    traj.energies.pop_back();
    traj.theta_norms.pop_back();
    traj.observables["H"].pop_back();
    for (std::size_t i = 0; i < kets.times.size(); ++i) {
        const double s = kets.times[i];
        const double t = i == 0 ? t_interface : time_at(s);
        append(traj, t, kets.states[i], metrics.thetas[i], detail::upper_matrix(gamma_at(s)), c);
    }
    return traj;
}

}  // namespace qhsim
