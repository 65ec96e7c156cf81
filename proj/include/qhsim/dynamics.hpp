#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qhsim/metric.hpp"
#include "qhsim/model.hpp"
#include "qhsim/operator.hpp"

namespace qhsim {

using MatrixFn = std::function<Matrix(double)>;

enum class Basis {
    Ket,        // |psi> of the first and second spaces
    CurlyKet,   // Theta |psi>
    Spiked,     // conventional-space ket Omega |psi>
};

struct StateVector {
    Vector amplitudes;
    Basis basis = Basis::Ket;
};

struct StateSeries {
    Basis basis = Basis::Ket;
    std::vector<double> times;
    std::vector<Vector> states;
};

struct MetricSeries {
    std::vector<double> times;
    std::vector<Matrix> thetas;
    // Largest entry of the anti-Hermitian part removed after a step.
    double max_symmetrization = 0.0;
    double min_eigenvalue = 0.0;
};

struct ObservableSeries {
    std::vector<double> times;
    std::vector<Matrix> values;
};

struct GeneratorBundle {
    Matrix h;
    Matrix sigma;
    Matrix g;  // h - sigma
};

GeneratorBundle make_generator(Matrix h, Matrix sigma);

inline double default_fd_step(double t) { return 1e-6 * std::max(1.0, std::abs(t)); }

inline constexpr double kSigmaTolerance = 1e-6;

/// Sigma(t) = i Omega^-1(t) dOmega/dt by central differences with step
/// fd_step (non-positive selects default_fd_step). The result is
/// recomputed with half the step; a change above 10 * tol throws
/// StepTooLarge.
MatrixOperator sigma_of(const MatrixFn& omega_fn, double t, double fd_step = 0.0,
                        double tol = kSigmaTolerance);

/// RK4 for i d|psi>/dt = G(t) |psi> on uniform_grid(t0, t1, dt).
StateSeries evolve_state(const MatrixFn& g_fn, const Vector& psi0, double t0, double t1, double dt);

/// RK4 for i d|psi>>/dt = G^dagger(t) |psi>>. `gdag_fn` returns G^dagger.
StateSeries evolve_costate(const MatrixFn& gdag_fn, const Vector& psi_tilde0, double t0, double t1, double dt);

/// RK4 for i dTheta/dt = G^dagger Theta - Theta G, re-symmetrized after
/// every step. Throws PositivityLost when Theta stops being positive definite.
MetricSeries evolve_metric(const MatrixFn& g_fn, const Matrix& theta0, double t0, double t1, double dt);

enum class HeisenbergVariant {
    Observable,   // i dL/dt = L S - S L, S = Sigma
    Adjoint,      // i dL'/dt = L' S' - S' L' with L' = L^dagger, S' = Sigma^dagger
    Hamiltonian,  // i dH/dt = G H - H G, generator_fn returns G
};

/// For the Adjoint variant, lambda0 is the observable itself; the series
/// holds its adjoint.
ObservableSeries evolve_observable(const Matrix& lambda0, const MatrixFn& generator_fn, double t0, double t1,
                                   double dt, HeisenbergVariant variant = HeisenbergVariant::Observable);

/// psi^dagger Theta Q psi. The imaginary part is returned as is.
cplx expectation(const Vector& psi, const Matrix& theta, const Matrix& q);

/// psi^dagger Theta psi (real part).
double theta_norm(const Vector& psi, const Matrix& theta);

/// Time-dependent choice of the free metric parameters u and xi.
///
/// sin_xi receives the signed distance from the interface so that profiles
/// continue smoothly through gamma = 0.
struct MetricProfile {
    std::function<double(double t)> u;
    std::function<double(double t, double gamma)> sin_xi;
    std::string description;

    /// u = 1, sin xi = gamma: Theta = [[1, -gamma], [-gamma, 1]], equal to I
    /// on the interface.
    static MetricProfile minimal();
    static MetricProfile constant(double u0, double xi0);
};

/// Profile metric for the benchmark at signed distance gamma and time t.
Matrix profile_metric(const MetricProfile& profile, double t, double gamma);

struct CrossingOptions {
    double dt = 1e-3;
    double fd_step = 0.0;  // <= 0: default_fd_step
    double sigma_tol = kSigmaTolerance;
    DysonScheme scheme = DysonScheme::HermitianSqrt;
    // Metric at the interface; identity when absent.
    std::optional<Matrix> theta0;
};

/// H, Sigma and G for the benchmark at a time strictly inside the
/// quasi-Hermitian window, with Omega(t) factored from the profile metric.
GeneratorBundle profile_generator(double c, const MetricProfile& profile, double t,
                                  const CrossingOptions& options = {});

struct Trajectory {
    std::vector<double> times;
    std::vector<StateVector> states;
    std::vector<Matrix> metrics;
    std::vector<EnergyPair> energies;
    std::vector<double> theta_norms;
    std::map<std::string, std::vector<cplx>> observables;
    std::optional<double> interface_time;
    double max_symmetrization = 0.0;

    std::size_t size() const { return times.size(); }
};

/// RK4 with the Hermitian h(c, t) and Omega = I. Requires c <= t^2 on the
/// whole window.
Trajectory conventional_evolve(double c, const Vector& psi0, double t0, double t1, double dt);

/// Evolve through the Hermitian / quasi-Hermitian interface t0 = -sqrt(c).
///
/// Left of t0 the textbook equation is used with Theta = I. At t0 the state
/// is handed over unchanged and the ket, the metric and H are integrated
/// on a uniform grid in sigma = sqrt(t - t0); in that variable the
/// generator stays bounded at the interface. The window end must stay
/// before the next interface (c < 1) or the exceptional point (c >= 1).
Trajectory run_crossing(double c, const MetricProfile& profile, const Vector& psi0, double t_a, double t_b,
                        const CrossingOptions& options = {});

}  // namespace qhsim
