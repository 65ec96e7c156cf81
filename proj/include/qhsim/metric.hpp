#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qhsim/model.hpp"
#include "qhsim/operator.hpp"

namespace qhsim {

/// Coordinates of the two-parameter metric family of the benchmark.
///
/// gamma is the distance from the interface (gamma = sqrt(c - t^2)), u the
/// half-trace of the metric and xi the positivity angle. The entries of the
/// metric are real only when sin(xi) >= gamma; that boundary is included.
class MetricParams {
public:
    MetricParams(double gamma, double u, double xi);

    double gamma() const { return gamma_; }
    double u() const { return u_; }
    double xi() const { return xi_; }

private:
    double gamma_;
    double u_;
    double xi_;
};

/// Real symmetric positive-definite 2x2 metric [[a, b], [b, d]].
class MetricMatrix {
public:
    explicit MetricMatrix(MatrixOperator theta);

    const MatrixOperator& theta() const { return theta_; }
    const Matrix& matrix() const { return theta_.matrix(); }
    double a() const { return theta_(0, 0).real(); }
    double b() const { return theta_(0, 1).real(); }
    double d() const { return theta_(1, 1).real(); }

private:
    MatrixOperator theta_;
};

/// a, d = u +- u sqrt(sin^2 xi - gamma^2), b = -gamma u.
///
/// The minus sign on b is the one that makes H^dagger Theta = Theta H hold
/// for H = [[-1, gamma], [-gamma, 1]].
MetricMatrix build_metric(const MetricParams& params);

/// (u (1 + sin xi), u (1 - sin xi))
std::pair<double, double> metric_eigenvalues(const MetricParams& params);

/// max_ij |(H^dagger Theta - Theta H)_ij|
double dieudonne_residual(const Matrix& h, const Matrix& theta);
double dieudonne_residual(const MatrixOperator& h, const MatrixOperator& theta);

enum class DysonScheme { HermitianSqrt, Cholesky };

std::string_view scheme_name(DysonScheme scheme);
std::optional<DysonScheme> scheme_from_name(std::string_view name);

struct DysonMap {
    MatrixOperator omega;
    DysonScheme scheme;
};

/// Factor Theta = Omega^dagger Omega.
///
/// HermitianSqrt gives the unique positive-definite Hermitian root;
/// Cholesky gives the upper-triangular factor with positive diagonal. Throws
/// NotPositiveDefinite when an eigenvalue of Theta is at or below
/// 1e-13 * trace.
DysonMap dyson_factor(const Matrix& theta, DysonScheme scheme = DysonScheme::HermitianSqrt);
DysonMap dyson_factor(const MetricMatrix& theta, DysonScheme scheme = DysonScheme::HermitianSqrt);

/// Omega H Omega^-1. Throws SingularMap when Omega is numerically singular.
MatrixOperator hermitian_image(const MatrixOperator& h_upper, const DysonMap& omega);

/// First-order metric Theta[gamma] = I + gamma K for a Taylor family.
struct PerturbativeMetric {
    Matrix k;
    std::string gauge;
    // I + gamma K stays positive definite for gamma < positivity_threshold
    // (infinity when K has no negative eigenvalue).
    double positivity_threshold;
};

inline constexpr double kDegeneracyTolerance = 1e-9;

/// Solve H0^dagger K - K H0 = H1 - H1^dagger for Hermitian K.
///
/// Works in the eigenbasis of H0, where K_ij = C_ij / (E_i - E_j) off the
/// diagonal and the free diagonal is set to zero. Pairs with
/// |E_i - E_j| < tol_deg * spectral_radius(H0) and a coupling above the same
/// threshold throw DegenerateObstruction.
PerturbativeMetric perturbative_metric(const TaylorFamily& family, double tol_deg = kDegeneracyTolerance);

/// max_ij |H0^dagger K - K H0 - (H1 - H1^dagger)|_ij
double first_order_residual(const TaylorFamily& family, const Matrix& k);

/// dieudonne_residual(family.eval(g), I + g K) for every g in `gammas`.
/// `gammas` must be non-negative and strictly decreasing.
std::vector<double> residual_order_scan(const TaylorFamily& family, const PerturbativeMetric& metric,
                                        const std::vector<double>& gammas);

namespace detail {

// Metric entries for a possibly negative gamma; used by smooth metric
// profiles that continue through the interface.
Matrix metric_entries(double gamma, double u, double sin_xi);

Matrix hermitian_sqrt(const Matrix& theta);

}  // namespace detail

}  // namespace qhsim
