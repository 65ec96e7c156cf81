#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

#include "qhsim/dynamics.hpp"
#include "qhsim/model.hpp"

namespace qhsim {

/// Uniform axis; node i is min + i * (max - min) / (count - 1).
struct GridAxis {
    double min = 0.0;
    double max = 1.0;
    std::size_t count = 2;

    double step() const { return (max - min) / static_cast<double>(count - 1); }
    double at(std::size_t i) const { return min + static_cast<double>(i) * step(); }
    void validate(std::string_view name) const;
};

struct GridSpec {
    GridAxis c;
    GridAxis t;

    void validate() const;
};

struct ScanRecord {
    double c;
    double t;
    Region region;
    EnergyPair energy;
};

/// Worker count for scans: QHSIM_THREADS when set to a positive integer,
/// otherwise the hardware concurrency.
unsigned scan_threads();

/// One record per grid node, c outer and t inner.
std::vector<ScanRecord> phase_diagram(const GridSpec& grid, double boundary_tol = 0.0, unsigned threads = 0);

/// E+-(c, t) along a t axis at fixed c.
std::vector<ScanRecord> spectrum_scan(double c, const GridAxis& t_axis, double boundary_tol = 0.0);

inline constexpr std::array<std::string_view, 13> kCrossingColumns = {
    "t",         "psi_re_0",   "psi_im_0",  "psi_re_1",  "psi_im_1",    "theta_a",     "theta_b",
    "theta_d",   "theta_norm", "e_plus_re", "e_plus_im", "expect_H_re", "expect_H_im",
};

struct CrossingScan {
    Trajectory trajectory;
    std::vector<std::array<double, kCrossingColumns.size()>> rows;
};

std::vector<std::array<double, kCrossingColumns.size()>> flatten(const Trajectory& trajectory);

CrossingScan crossing_scan(double c, const MetricProfile& profile, const Vector& psi0, double t_a, double t_b,
                           const CrossingOptions& options = {});

}  // namespace qhsim
