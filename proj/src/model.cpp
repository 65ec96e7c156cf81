#include "qhsim/model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "qhsim/errors.hpp"

namespace qhsim {

ParameterPoint::ParameterPoint(double c, double t) : c_(c), t_(t) {
    if (!std::isfinite(c) || !std::isfinite(t))
        throw DomainError("parameter point must be finite");
}

std::string_view region_name(Region region) {
    switch (region) {
        case Region::Conventional: return "conventional";
        case Region::Interface: return "interface";
        case Region::QuasiHermitian: return "quasi-hermitian";
        case Region::Breakdown: return "breakdown";
        case Region::Forbidden: return "forbidden";
    }
    return "unknown";
}

std::optional<Region> region_from_name(std::string_view name) {
    for (Region r : {Region::Conventional, Region::Interface, Region::QuasiHermitian, Region::Breakdown,
                     Region::Forbidden})
        if (region_name(r) == name) return r;
    return std::nullopt;
}

Region classify(const ParameterPoint& point, double boundary_tol) {
    if (!(boundary_tol >= 0.0) || !std::isfinite(boundary_tol))
        throw DomainError("boundary_tol must be a finite non-negative number");
    const double t2 = point.t() * point.t();
    const double c = point.c();
    if (c < t2 - boundary_tol) return Region::Conventional;
    if (c <= t2 + boundary_tol) return Region::Interface;
    if (c < t2 + 1.0 - boundary_tol) return Region::QuasiHermitian;
    if (c <= t2 + 1.0 + boundary_tol) return Region::Breakdown;
    return Region::Forbidden;
}

namespace detail {

Matrix lower_matrix(double s) {
    Matrix h(2, 2);
    h << -1.0, kI * s, -kI * s, 1.0;
    return h;
}

Matrix upper_matrix(double gamma) {
    Matrix h(2, 2);
    h << -1.0, gamma, -gamma, 1.0;
    return h;
}

}  // namespace detail

MatrixOperator hamiltonian_lower(const ParameterPoint& point) {
    const double gap = point.t() * point.t() - point.c();
    if (gap < 0.0)
        throw RegionError("hamiltonian_lower requires c <= t^2 (c=" + std::to_string(point.c()) +
                          ", t=" + std::to_string(point.t()) + ")");
    return {Role::HamiltonianLower, detail::lower_matrix(std::sqrt(gap))};
}

MatrixOperator hamiltonian_upper(const ParameterPoint& point) {
    const double gap = point.c() - point.t() * point.t();
    if (gap <= 0.0)
        throw RegionError("hamiltonian_upper requires c > t^2 (c=" + std::to_string(point.c()) +
                          ", t=" + std::to_string(point.t()) + ")");
    return {Role::HamiltonianUpper, detail::upper_matrix(std::sqrt(gap))};
}

EnergyPair energies(const ParameterPoint& point) {
    // +0.0 imaginary part keeps the principal branch on the cut.
    const cplx radicand{point.t() * point.t() + 1.0 - point.c(), 0.0};
    const cplx e = std::sqrt(radicand);
    return {e, -e};
}

std::optional<std::pair<double, double>> interface_times(double c) {
    if (!std::isfinite(c)) throw DomainError("c must be finite");
    if (c < 0.0) return std::nullopt;
    const double r = std::sqrt(c);
    return std::pair{-r, r};
}

std::optional<std::pair<double, double>> exceptional_times(double c) {
    if (!std::isfinite(c)) throw DomainError("c must be finite");
    if (c < 1.0) return std::nullopt;
    const double r = std::sqrt(c - 1.0);
    return std::pair{-r, r};
}

TaylorFamily::TaylorFamily(Matrix h0, Matrix h1) : h0_(std::move(h0)), h1_(std::move(h1)) {
    if (h0_.rows() == 0 || h0_.rows() != h0_.cols() || h1_.rows() != h0_.rows() || h1_.cols() != h0_.cols())
        throw DimensionError("Taylor family needs two square matrices of equal size");
    if (!all_finite(h0_) || !all_finite(h1_)) throw DomainError("Taylor family entries must be finite");
    const double scale = std::max(1.0, max_abs(h0_));
    if (hermiticity_residual(h0_) > 64 * std::numeric_limits<double>::epsilon() * scale)
        throw DomainError("anchor H[0] of a Taylor family must be Hermitian");
}

TaylorFamily benchmark_family() {
    Matrix h0(2, 2), h1(2, 2);
    h0 << -1.0, 0.0, 0.0, 1.0;
    h1 << 0.0, 1.0, -1.0, 0.0;
    return {h0, h1};
}

}  // namespace qhsim
