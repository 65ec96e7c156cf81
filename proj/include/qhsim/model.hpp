#pragma once

#include <optional>
#include <string_view>
#include <utility>

#include "qhsim/operator.hpp"

namespace qhsim {

/// A point of the coupling-time plane. Both coordinates are dimensionless.
class ParameterPoint {
public:
    ParameterPoint(double c, double t);

    double c() const { return c_; }
    double t() const { return t_; }

private:
    double c_;
    double t_;
};

enum class Region {
    Conventional,    // c < t^2, Hermitian textbook regime
    Interface,       // c = t^2
    QuasiHermitian,  // t^2 < c < t^2 + 1
    Breakdown,       // c = t^2 + 1, exceptional-point parabola
    Forbidden,       // c > t^2 + 1, complex spectrum
};

std::string_view region_name(Region region);
std::optional<Region> region_from_name(std::string_view name);

/// Points within `boundary_tol` of either parabola get the boundary tag.
Region classify(const ParameterPoint& point, double boundary_tol = 0.0);

struct EnergyPair {
    cplx e_plus;
    cplx e_minus;
};

/// [[-1, i s], [-i s, 1]] with s = sqrt(t^2 - c). Throws RegionError when c > t^2.
MatrixOperator hamiltonian_lower(const ParameterPoint& point);

/// [[-1, g], [-g, 1]] with g = sqrt(c - t^2). Throws RegionError when c <= t^2.
MatrixOperator hamiltonian_upper(const ParameterPoint& point);

/// E+- = +-sqrt(t^2 + 1 - c), principal branch.
EnergyPair energies(const ParameterPoint& point);

/// +-sqrt(c), or nothing when c < 0.
std::optional<std::pair<double, double>> interface_times(double c);

/// +-sqrt(c - 1), or nothing when c < 1.
std::optional<std::pair<double, double>> exceptional_times(double c);

/// First-order Taylor family H[g] = h0 + g h1 anchored on the interface,
/// where h0 is Hermitian.
class TaylorFamily {
public:
    TaylorFamily(Matrix h0, Matrix h1);

    Eigen::Index dim() const { return h0_.rows(); }
    const Matrix& h0() const { return h0_; }
    const Matrix& h1() const { return h1_; }

    Matrix eval(double gamma) const { return h0_ + gamma * h1_; }

private:
    Matrix h0_;
    Matrix h1_;
};

/// The 2x2 benchmark as a Taylor family in g = sqrt(c - t^2). It is exactly
/// linear, so eval(g) equals hamiltonian_upper wherever that is defined.
TaylorFamily benchmark_family();

namespace detail {

// Unchecked builders keyed on the off-diagonal magnitude; callers own the
// region bookkeeping.
Matrix lower_matrix(double s);
Matrix upper_matrix(double gamma);

}  // namespace detail

}  // namespace qhsim
