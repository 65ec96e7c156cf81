#pragma once

#include <cmath>
#include <vector>

#include "qhsim/errors.hpp"

namespace qhsim {

/// Classical fourth-order Runge-Kutta step for y' = f(t, y).
template <class State, class Rhs>
State rk4_step(const Rhs& f, double t, const State& y, double h) {
    const State k1 = f(t, y);
    const State k2 = f(t + 0.5 * h, State(y + (0.5 * h) * k1));
    const State k3 = f(t + 0.5 * h, State(y + (0.5 * h) * k2));
    const State k4 = f(t + h, State(y + h * k3));
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Nodes t0 + i (t1 - t0) / n with n the smallest count whose step does not
/// exceed dt. The last node is t1 exactly.
inline std::vector<double> uniform_grid(double t0, double t1, double dt) {
    if (!std::isfinite(t0) || !std::isfinite(t1) || !(t1 > t0))
        throw DomainError("integration window must satisfy t1 > t0");
    if (!std::isfinite(dt) || !(dt > 0.0)) throw DomainError("dt must be positive");
    const double span = t1 - t0;
    auto n = static_cast<long long>(std::ceil(span / dt - 1e-9));
    if (n < 1) n = 1;
    std::vector<double> grid(static_cast<std::size_t>(n) + 1);
    for (long long i = 0; i < n; ++i) grid[static_cast<std::size_t>(i)] = t0 + span * static_cast<double>(i) / n;
    grid.back() = t1;
    return grid;
}

}  // namespace qhsim
