#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "qhsim/errors.hpp"
#include "qhsim/metric.hpp"

using namespace qhsim;
using std::numbers::pi;

namespace {

Matrix mat2(cplx a, cplx b, cplx c, cplx d) {
    Matrix m(2, 2);
    m << a, b, c, d;
    return m;
}

MetricParams random_params(oracle::Rng& rng) {
    const double gamma = rng.uniform(0.0, 0.999);
    const double xi = rng.uniform(std::asin(gamma), pi / 2 - 1e-6);
    const double u = rng.uniform(0.05, 20.0);
    return {gamma, u, xi};
}

Eigen::VectorXd dense_eigenvalues(const Matrix& m) {
    return Eigen::SelfAdjointEigenSolver<Matrix>(m, Eigen::EigenvaluesOnly).eigenvalues();
}

}  // namespace

TEST_CASE("metric parameters validation") {
    CHECK_THROWS_AS(MetricParams(0.5, 1.0, 0.1), DomainError);  // sin xi < gamma
    CHECK_THROWS_AS(MetricParams(0.0, 0.0, 0.1), DomainError);
    CHECK_THROWS_AS(MetricParams(0.0, -1.0, 0.1), DomainError);
    CHECK_THROWS_AS(MetricParams(1.0, 1.0, 1.5), DomainError);
    CHECK_THROWS_AS(MetricParams(0.1, 1.0, pi / 2), DomainError);
    // realness boundary sin xi = gamma is admitted
    CHECK_NOTHROW(MetricParams(0.5, 1.0, std::asin(0.5)));
    CHECK_NOTHROW(MetricParams(0.0, 1.0, 0.0));
}

TEST_CASE("build_metric: reference values") {
    CHECK(oracle::max_abs(build_metric({0.0, 1.0, 0.0}).matrix() - Matrix::Identity(2, 2)) == 0.0);

    const Matrix theta = build_metric({0.5, 1.0, pi / 6}).matrix();
    CHECK(oracle::max_abs(theta - mat2(1, -0.5, -0.5, 1)) < 1e-15);
    CHECK(oracle::dieudonne(mat2(-1, 0.5, -0.5, 1), theta) < 1e-15);

    const Matrix diag = build_metric({0.0, 2.0, pi / 4}).matrix();
    CHECK(oracle::max_abs(diag - mat2(2 + std::sqrt(2.0), 0, 0, 2 - std::sqrt(2.0))) < 1e-14);
    const auto ev = dense_eigenvalues(diag);
    CHECK(ev(1) == doctest::Approx(2.0 * (1 + std::sin(pi / 4))));
    CHECK(ev(0) == doctest::Approx(2.0 * (1 - std::sin(pi / 4))));

    const MetricMatrix m = build_metric({0.3, 1.5, 0.9});
    CHECK(m.theta().role() == Role::Metric);
    CHECK(m.a() > m.d());
    CHECK(m.b() == doctest::Approx(-0.45));
    CHECK((m.a() + m.d()) / 2 == doctest::Approx(1.5));
}

TEST_CASE("dieudonne_residual") {
    oracle::Rng rng(17);
    const Matrix herm = rng.hermitian(3);
    CHECK(dieudonne_residual(herm, Matrix::Identity(3, 3)) < 1e-15);

    const Matrix h = mat2(-1, 0.5, -0.5, 1);
    CHECK(dieudonne_residual(h, mat2(1, -0.5, -0.5, 1)) == 0.0);
    CHECK(dieudonne_residual(h, Matrix::Identity(2, 2)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(oracle::dieudonne(h, Matrix::Identity(2, 2)) == doctest::Approx(2 * 0.5));
    CHECK_THROWS_AS(dieudonne_residual(h, Matrix::Identity(3, 3)), DimensionError);
}

TEST_CASE("metric_eigenvalues") {
    auto [p, m] = metric_eigenvalues({0.0, 1.0, 0.0});
    CHECK(p == 1.0);
    CHECK(m == 1.0);
    std::tie(p, m) = metric_eigenvalues({0.5, 1.0, pi / 6});
    CHECK(p == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(m == doctest::Approx(0.5).epsilon(1e-15));
    const MetricParams near_edge(0.0, 2.0, pi / 2 - 0.1);
    std::tie(p, m) = metric_eigenvalues(near_edge);
    const auto ev = dense_eigenvalues(build_metric(near_edge).matrix());
    CHECK(std::abs(p - 2 * (1 + std::cos(0.1))) < 1e-12);
    CHECK(std::abs(m - 2 * (1 - std::cos(0.1))) < 1e-12);
    CHECK(std::abs(ev(1) - p) < 1e-12);
    CHECK(std::abs(ev(0) - m) < 1e-12);
}

TEST_CASE("random metrics are compatible and positive") {
    oracle::Rng rng(101);
    double worst_residual = 0.0, worst_eig = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const MetricParams params = random_params(rng);
        const Matrix theta = build_metric(params).matrix();
        const Matrix h = mat2(-1, params.gamma(), -params.gamma(), 1);
        worst_residual = std::max(worst_residual, oracle::dieudonne(h, theta) / params.u());
        const auto ev = oracle::eig2(theta);
        const auto [p, m] = metric_eigenvalues(params);
        CHECK(ev[0].real() > 0.0);
        worst_eig = std::max({worst_eig, std::abs(ev[1] - p) / params.u(), std::abs(ev[0] - m) / params.u()});
    }
    CHECK(worst_residual <= 1e-12);
    CHECK(worst_eig <= 1e-12);
}

TEST_CASE("dyson_factor: reference cases") {
    for (DysonScheme s : {DysonScheme::HermitianSqrt, DysonScheme::Cholesky}) {
        CAPTURE(scheme_name(s));
        const DysonMap id = dyson_factor(Matrix::Identity(2, 2), s);
        CHECK(id.scheme == s);
        CHECK(id.omega.role() == Role::Dyson);
        CHECK(oracle::max_abs(id.omega.matrix() - Matrix::Identity(2, 2)) < 1e-15);
        const DysonMap d = dyson_factor(mat2(4, 0, 0, 1), s);
        CHECK(oracle::max_abs(d.omega.matrix() - mat2(2, 0, 0, 1)) < 1e-15);
        const Matrix theta = mat2(1, -0.5, -0.5, 1);
        const Matrix w = dyson_factor(theta, s).omega.matrix();
        CHECK(oracle::max_abs(oracle::multiply(oracle::dagger(w), w) - theta) <= 1e-12);
    }
    const Matrix root = dyson_factor(mat2(1, -0.5, -0.5, 1), DysonScheme::HermitianSqrt).omega.matrix();
    CHECK(hermiticity_residual(root) < 1e-15);
    CHECK(dense_eigenvalues(root).minCoeff() > 0.0);
    const Matrix chol = dyson_factor(mat2(1, -0.5, -0.5, 1), DysonScheme::Cholesky).omega.matrix();
    CHECK(chol(1, 0) == cplx(0.0, 0.0));
    CHECK(chol(0, 0).real() > 0.0);
    CHECK(chol(1, 1).real() > 0.0);
    CHECK(oracle::max_abs(root - chol) > 0.1);
}

TEST_CASE("dyson_factor rejects indefinite and near-singular metrics") {
    CHECK_THROWS_AS(dyson_factor(mat2(1, 2, 2, 1)), NotPositiveDefinite);
    CHECK_THROWS_AS(dyson_factor(mat2(1, 0, 0, 1e-14)), NotPositiveDefinite);
    CHECK_THROWS_AS(dyson_factor(mat2(1, 0, 0, -1), DysonScheme::Cholesky), NotPositiveDefinite);
}

TEST_CASE("dyson_factor round trip on random metrics") {
    oracle::Rng rng(202);
    for (int i = 0; i < 1000; ++i) {
        const Matrix theta = i % 2 ? build_metric(random_params(rng)).matrix()
                                   : rng.positive_definite(2 + i % 3);
        const double scale = std::max(1.0, oracle::max_abs(theta));
        for (DysonScheme s : {DysonScheme::HermitianSqrt, DysonScheme::Cholesky}) {
            const Matrix w = dyson_factor(theta, s).omega.matrix();
            REQUIRE(oracle::max_abs(oracle::multiply(oracle::dagger(w), w) - theta) <= 1e-12 * scale);
        }
    }
}

TEST_CASE("hermitian_image") {
    oracle::Rng rng(33);
    const Matrix herm = rng.hermitian(3);
    const DysonMap id{MatrixOperator(Role::Dyson, Matrix::Identity(3, 3)), DysonScheme::HermitianSqrt};
    CHECK(oracle::max_abs(hermitian_image(MatrixOperator(Role::HamiltonianUpper, herm), id).matrix() - herm) < 1e-14);

    const MatrixOperator h(Role::HamiltonianUpper, mat2(-1, 0.5, -0.5, 1));
    const Matrix image = hermitian_image(h, dyson_factor(mat2(1, -0.5, -0.5, 1))).matrix();
    CHECK(hermiticity_residual(image) <= 1e-10);
    const auto ev = oracle::eig2(image);
    CHECK(std::abs(ev[0] + std::sqrt(0.75)) <= 1e-10);
    CHECK(std::abs(ev[1] - std::sqrt(0.75)) <= 1e-10);

    const double g = 1e-9;
    const MatrixOperator near(Role::HamiltonianUpper, mat2(-1, g, -g, 1));
    const Matrix near_image = hermitian_image(near, dyson_factor(build_metric({g, 1.0, std::asin(g)}))).matrix();
    CHECK(oracle::max_abs(near_image - mat2(-1, 0, 0, 1)) < 1e-8);

    const DysonMap singular{MatrixOperator(Role::Dyson, mat2(1, 1, 1, 1)), DysonScheme::HermitianSqrt};
    CHECK_THROWS_AS(hermitian_image(h, singular), SingularMap);
}

TEST_CASE("hermitian_image is Hermitian and isospectral along the benchmark") {
    oracle::Rng rng(44);
    for (int i = 0; i < 500; ++i) {
        const MetricParams params = random_params(rng);
        const MatrixOperator h(Role::HamiltonianUpper, mat2(-1, params.gamma(), -params.gamma(), 1));
        for (DysonScheme s : {DysonScheme::HermitianSqrt, DysonScheme::Cholesky}) {
            const Matrix image = hermitian_image(h, dyson_factor(build_metric(params), s)).matrix();
            CHECK(hermiticity_residual(image) <= 1e-10);
            const auto a = oracle::eig2(image), b = oracle::eig2(h.matrix());
            CHECK(std::abs(a[0] - b[0]) <= 1e-10);
            CHECK(std::abs(a[1] - b[1]) <= 1e-10);
        }
    }
}

TEST_CASE("perturbative_metric: benchmark") {
    const TaylorFamily f = benchmark_family();
    const PerturbativeMetric pm = perturbative_metric(f);
    CHECK(oracle::max_abs(pm.k - mat2(0, -1, -1, 0)) <= 1e-14);
    // H0 K - K H0 = C checked by explicit products
    const Matrix c = f.h1() - oracle::dagger(f.h1());
    CHECK(oracle::max_abs(c - mat2(0, 2, -2, 0)) == 0.0);
    CHECK(oracle::max_abs(oracle::multiply(f.h0(), pm.k) - oracle::multiply(pm.k, f.h0()) - c) <= 1e-14);
    CHECK(first_order_residual(f, pm.k) <= 1e-14);
    CHECK(pm.positivity_threshold == doctest::Approx(1.0));
    CHECK_FALSE(pm.gauge.empty());
}

TEST_CASE("perturbative_metric: Hermitian perturbation needs no correction") {
    oracle::Rng rng(55);
    const TaylorFamily f(rng.real_symmetric_with_gap(3, 0.2), rng.hermitian(3));
    const PerturbativeMetric pm = perturbative_metric(f);
    CHECK(oracle::max_abs(pm.k) <= 1e-14);
    CHECK(std::isinf(pm.positivity_threshold));
}

TEST_CASE("perturbative_metric: random families satisfy the first-order constraint") {
    oracle::Rng rng(66);
    for (int i = 0; i < 200; ++i) {
        const Eigen::Index n = 2 + i % 4;
        const TaylorFamily f(rng.real_symmetric_with_gap(n, 0.1), rng.real_matrix(n));
        const PerturbativeMetric pm = perturbative_metric(f);
        CHECK(hermiticity_residual(pm.k) == 0.0);
        const Matrix c = f.h1() - oracle::dagger(f.h1());
        const double residual =
            oracle::max_abs(oracle::multiply(oracle::dagger(f.h0()), pm.k) - oracle::multiply(pm.k, f.h0()) - c);
        CHECK(residual <= 1e-12);

        // gauge freedom: any real diagonal in the H0 eigenbasis
        Eigen::SelfAdjointEigenSolver<Matrix> eig(f.h0());
        Eigen::VectorXcd shift(n);
        for (Eigen::Index j = 0; j < n; ++j) shift(j) = rng.normal();
        const Matrix k2 = pm.k + eig.eigenvectors() * shift.asDiagonal() * eig.eigenvectors().adjoint();
        CHECK(std::abs(first_order_residual(f, k2) - first_order_residual(f, pm.k)) <= 1e-12);

        // I + g K is positive below the reported threshold
        if (std::isfinite(pm.positivity_threshold)) {
            const Matrix theta = Matrix::Identity(n, n) + 0.99 * pm.positivity_threshold * pm.k;
            CHECK(dense_eigenvalues(theta).minCoeff() > 0.0);
            const Matrix past = Matrix::Identity(n, n) + 1.01 * pm.positivity_threshold * pm.k;
            CHECK(dense_eigenvalues(past).minCoeff() < 0.0);
        }
    }
}

TEST_CASE("perturbative_metric: degenerate anchor") {
    Matrix h0 = Matrix::Zero(3, 3);
    h0.diagonal() << 1.0, 1.0, -2.0;
    Matrix coupled = Matrix::Zero(3, 3);
    coupled(0, 1) = 1.0;
    CHECK_THROWS_AS(perturbative_metric(TaylorFamily(h0, coupled)), DegenerateObstruction);

    // couplings only across the gap: solvable, degenerate block left at zero
    Matrix across = Matrix::Zero(3, 3);
    across(0, 2) = 1.0;
    const PerturbativeMetric pm = perturbative_metric(TaylorFamily(h0, across));
    CHECK(first_order_residual(TaylorFamily(h0, across), pm.k) <= 1e-14);
}

TEST_CASE("residual_order_scan") {
    const TaylorFamily bench = benchmark_family();
    const PerturbativeMetric pm = perturbative_metric(bench);
    for (double r : residual_order_scan(bench, pm, {0.4, 0.2, 0.1})) CHECK(r <= 1e-14);
    CHECK(residual_order_scan(bench, pm, {0.0}).front() == 0.0);
    CHECK_THROWS_AS(residual_order_scan(bench, pm, {0.1, 0.2}), DomainError);
    CHECK_THROWS_AS(residual_order_scan(bench, pm, {-0.1}), DomainError);

    oracle::Rng rng(77);
    for (int i = 0; i < 20; ++i) {
        const TaylorFamily f(rng.real_symmetric_with_gap(3, 0.1), rng.real_matrix(3));
        const PerturbativeMetric k = perturbative_metric(f);
        const auto res = residual_order_scan(f, k, {0.02, 0.01, 0.005});
        CHECK(res[0] / res[1] >= 3.2);
        CHECK(res[0] / res[1] <= 4.8);
        CHECK(res[1] / res[2] >= 3.2);
        CHECK(res[1] / res[2] <= 4.8);
    }
}
