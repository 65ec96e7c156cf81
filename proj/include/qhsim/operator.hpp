#pragma once

#include <complex>
#include <string_view>

#include <Eigen/Dense>

namespace qhsim {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr cplx kI{0.0, 1.0};

enum class Role {
    HamiltonianLower,  // Hermitian textbook Hamiltonian
    HamiltonianUpper,  // non-Hermitian, quasi-Hermitian energy operator
    Metric,
    Dyson,
    Generator,
    Sigma,
    Observable,
};

std::string_view role_name(Role role);

/// Dense square complex matrix tagged with its physical role.
///
/// Construction rejects non-square or non-finite input and, for
/// Role::Metric, anything that is not Hermitian up to a few ulps of its
/// largest entry.
class MatrixOperator {
public:
    MatrixOperator(Role role, Matrix entries);

    Role role() const { return role_; }
    Eigen::Index dim() const { return entries_.rows(); }
    const Matrix& matrix() const { return entries_; }

    cplx operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }

private:
    Role role_;
    Matrix entries_;
};

// max_ij |a_ij|
double max_abs(const Matrix& m);

// max_ij |m - m^dagger|
double hermiticity_residual(const Matrix& m);

bool all_finite(const Matrix& m);

}  // namespace qhsim
