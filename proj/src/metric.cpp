#include "qhsim/metric.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "qhsim/errors.hpp"

namespace qhsim {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// sin^2 xi - gamma^2, clamped to zero within rounding of the realness boundary.
double realness_margin(double gamma, double sin_xi) {
    const double margin = sin_xi * sin_xi - gamma * gamma;
    if (margin < 0.0 && margin > -8 * kEps) return 0.0;
    return margin;
}

void require_positive_definite(const Eigen::SelfAdjointEigenSolver<Matrix>& eig, const Matrix& theta) {
    const double trace = theta.trace().real();
    const double floor = 1e-13 * trace;
    if (!(trace > 0.0) || eig.eigenvalues().minCoeff() <= floor)
        throw NotPositiveDefinite("metric is not positive definite (min eigenvalue " +
                                  std::to_string(eig.eigenvalues().minCoeff()) + ")");
}

}  // namespace

MetricParams::MetricParams(double gamma, double u, double xi) : gamma_(gamma), u_(u), xi_(xi) {
    if (!std::isfinite(gamma) || !std::isfinite(u) || !std::isfinite(xi))
        throw DomainError("metric parameters must be finite");
    if (!(u > 0.0)) throw DomainError("metric half-trace u must be positive");
    if (gamma < 0.0 || gamma >= 1.0) throw DomainError("gamma must lie in [0, 1)");
    if (xi < 0.0 || xi >= std::numbers::pi / 2) throw DomainError("xi must lie in [0, pi/2)");
    if (realness_margin(gamma, std::sin(xi)) < 0.0)
        throw DomainError("sin(xi) < gamma: metric entries would be complex");
}

MetricMatrix::MetricMatrix(MatrixOperator theta) : theta_(std::move(theta)) {
    if (theta_.role() != Role::Metric) throw DomainError("MetricMatrix needs an operator with role metric");
    if (theta_.dim() != 2) throw DimensionError("benchmark metric is 2x2");
}

namespace detail {

Matrix metric_entries(double gamma, double u, double sin_xi) {
    const double margin = realness_margin(gamma, sin_xi);
    if (margin < 0.0) throw DomainError("|sin(xi)| < |gamma|: metric entries would be complex");
    const double spread = u * std::sqrt(margin);
    Matrix theta(2, 2);
    theta << u + spread, -gamma * u, -gamma * u, u - spread;
    return theta;
}

Matrix hermitian_sqrt(const Matrix& theta) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(theta);
    require_positive_definite(eig, theta);
    const Eigen::VectorXd root = eig.eigenvalues().cwiseSqrt();
    return eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().adjoint();
}

}  // namespace detail

MetricMatrix build_metric(const MetricParams& params) {
    return MetricMatrix{MatrixOperator{
        Role::Metric, detail::metric_entries(params.gamma(), params.u(), std::sin(params.xi()))}};
}

std::pair<double, double> metric_eigenvalues(const MetricParams& params) {
    const double s = std::sin(params.xi());
    return {params.u() * (1.0 + s), params.u() * (1.0 - s)};
}

double dieudonne_residual(const Matrix& h, const Matrix& theta) {
    if (h.rows() != h.cols() || theta.rows() != theta.cols() || h.rows() != theta.rows())
        throw DimensionError("dieudonne_residual: dimension mismatch");
    return max_abs(h.adjoint() * theta - theta * h);
}

double dieudonne_residual(const MatrixOperator& h, const MatrixOperator& theta) {
    return dieudonne_residual(h.matrix(), theta.matrix());
}

std::string_view scheme_name(DysonScheme scheme) {
    return scheme == DysonScheme::Cholesky ? "cholesky" : "hermitian-sqrt";
}

std::optional<DysonScheme> scheme_from_name(std::string_view name) {
    if (name == "hermitian-sqrt") return DysonScheme::HermitianSqrt;
    if (name == "cholesky") return DysonScheme::Cholesky;
    return std::nullopt;
}

DysonMap dyson_factor(const Matrix& theta, DysonScheme scheme) {
    if (theta.rows() != theta.cols()) throw DimensionError("metric must be square");
    const Matrix herm = 0.5 * (theta + theta.adjoint());
    if (scheme == DysonScheme::HermitianSqrt)
        return {MatrixOperator{Role::Dyson, detail::hermitian_sqrt(herm)}, scheme};

    Eigen::SelfAdjointEigenSolver<Matrix> eig(herm, Eigen::EigenvaluesOnly);
    require_positive_definite(eig, herm);
    Eigen::LLT<Matrix> llt(herm);
    if (llt.info() != Eigen::Success) throw NotPositiveDefinite("Cholesky factorization failed");
    // herm = L L^dagger, so Omega = L^dagger is upper triangular with a
    // positive real diagonal.
    Matrix omega = llt.matrixU();
    return {MatrixOperator{Role::Dyson, std::move(omega)}, scheme};
}

DysonMap dyson_factor(const MetricMatrix& theta, DysonScheme scheme) {
    return dyson_factor(theta.matrix(), scheme);
}

MatrixOperator hermitian_image(const MatrixOperator& h_upper, const DysonMap& omega) {
    const Matrix& w = omega.omega.matrix();
    if (w.rows() != h_upper.dim()) throw DimensionError("hermitian_image: dimension mismatch");
    Eigen::JacobiSVD<Matrix> svd(w);
    const auto& sv = svd.singularValues();
    if (!(sv(sv.size() - 1) > 1e-13 * sv(0))) throw SingularMap("Dyson map is numerically singular");
    const Matrix image = w * h_upper.matrix() * w.inverse();
    return {Role::HamiltonianLower, image};
}

PerturbativeMetric perturbative_metric(const TaylorFamily& family, double tol_deg) {
    const Eigen::Index n = family.dim();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (family.h0() + family.h0().adjoint()));
    const Eigen::VectorXd& e = eig.eigenvalues();
    const Matrix& v = eig.eigenvectors();

    const Matrix rhs = family.h1() - family.h1().adjoint();
    const Matrix rhs_eig = v.adjoint() * rhs * v;

    const double radius = std::max(e.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
    const double threshold = tol_deg * radius;

    Matrix k_eig = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == j) continue;
            const double gap = e(i) - e(j);
            if (std::abs(gap) < threshold) {
                if (std::abs(rhs_eig(i, j)) > threshold)
                    throw DegenerateObstruction("degenerate anchor levels " + std::to_string(i) + "," +
                                                std::to_string(j) +
                                                " are coupled by H'[0]: no first-order metric exists");
                continue;
            }
            k_eig(i, j) = rhs_eig(i, j) / gap;
        }
    }
    Matrix k = v * k_eig * v.adjoint();
    k = (0.5 * (k + k.adjoint())).eval();

    Eigen::SelfAdjointEigenSolver<Matrix> keig(k, Eigen::EigenvaluesOnly);
    const double lowest = keig.eigenvalues().minCoeff();
    const double positivity = lowest < 0.0 ? -1.0 / lowest : std::numeric_limits<double>::infinity();

    return {std::move(k), "zero diagonal in the eigenbasis of H[0] (minimal Frobenius norm)", positivity};
}

double first_order_residual(const TaylorFamily& family, const Matrix& k) {
    if (k.rows() != family.dim() || k.cols() != family.dim())
        throw DimensionError("first_order_residual: dimension mismatch");
    const Matrix& h0 = family.h0();
    const Matrix& h1 = family.h1();
    return max_abs(h0.adjoint() * k - k * h0 - (h1 - h1.adjoint()));
}

std::vector<double> residual_order_scan(const TaylorFamily& family, const PerturbativeMetric& metric,
                                        const std::vector<double>& gammas) {
    if (metric.k.rows() != family.dim()) throw DimensionError("residual_order_scan: dimension mismatch");
    std::vector<double> out;
    out.reserve(gammas.size());
    const Matrix id = Matrix::Identity(family.dim(), family.dim());
    for (std::size_t i = 0; i < gammas.size(); ++i) {
        const double g = gammas[i];
        if (!std::isfinite(g) || g < 0.0) throw DomainError("gammas must be finite and non-negative");
        if (i > 0 && !(g < gammas[i - 1])) throw DomainError("gammas must be strictly decreasing");
        out.push_back(dieudonne_residual(family.eval(g), id + g * metric.k));
    }
    return out;
}

}  // namespace qhsim
