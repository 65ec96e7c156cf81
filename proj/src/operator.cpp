#include "qhsim/operator.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "qhsim/errors.hpp"

namespace qhsim {

std::string_view role_name(Role role) {
    switch (role) {
        case Role::HamiltonianLower: return "hamiltonian-lower";
        case Role::HamiltonianUpper: return "hamiltonian-upper";
        case Role::Metric: return "metric";
        case Role::Dyson: return "dyson";
        case Role::Generator: return "generator";
        case Role::Sigma: return "sigma";
        case Role::Observable: return "observable";
    }
    return "unknown";
}

double max_abs(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermiticity_residual(const Matrix& m) {
    return max_abs(m - m.adjoint());
}

bool all_finite(const Matrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    return true;
}

MatrixOperator::MatrixOperator(Role role, Matrix entries) : role_(role), entries_(std::move(entries)) {
    if (entries_.rows() == 0 || entries_.rows() != entries_.cols())
        throw DimensionError("operator must be a non-empty square matrix, got " +
                             std::to_string(entries_.rows()) + "x" + std::to_string(entries_.cols()));
    if (!all_finite(entries_)) throw DomainError("operator entries must be finite");
    if (role_ == Role::Metric) {
        const double scale = std::max(1.0, max_abs(entries_));
        if (hermiticity_residual(entries_) > 16 * std::numeric_limits<double>::epsilon() * scale)
            throw DomainError("metric operator must be Hermitian");
    }
}

}  // namespace qhsim
