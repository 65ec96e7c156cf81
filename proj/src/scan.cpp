#include "qhsim/scan.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>
#include <thread>

#include "qhsim/errors.hpp"

namespace qhsim {

void GridAxis::validate(std::string_view name) const {
    if (!std::isfinite(min) || !std::isfinite(max) || !(min < max))
        throw DomainError(std::string(name) + " axis needs finite min < max");
    if (count < 2) throw DomainError(std::string(name) + " axis needs at least 2 points");
}

void GridSpec::validate() const {
    c.validate("c");
    t.validate("t");
}

unsigned scan_threads() {
    if (const char* env = std::getenv("QHSIM_THREADS")) {
        unsigned value = 0;
        const char* end = env + std::strlen(env);
        auto [ptr, ec] = std::from_chars(env, end, value);
        if (ec == std::errc{} && ptr == end && value > 0) return value;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

ScanRecord record_at(double c, double t, double boundary_tol) {
    const ParameterPoint p(c, t);
    return {c, t, classify(p, boundary_tol), energies(p)};
}

}  // namespace

std::vector<ScanRecord> phase_diagram(const GridSpec& grid, double boundary_tol, unsigned threads) {
    grid.validate();
    const std::size_t rows = grid.c.count;
    const std::size_t cols = grid.t.count;
    std::vector<ScanRecord> out(rows * cols);

    auto fill_rows = [&](std::size_t first, std::size_t last) {
        for (std::size_t i = first; i < last; ++i) {
            const double c = grid.c.at(i);
            for (std::size_t j = 0; j < cols; ++j) out[i * cols + j] = record_at(c, grid.t.at(j), boundary_tol);
        }
    };

    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(threads ? threads : scan_threads(), rows));
    if (workers <= 1) {
        fill_rows(0, rows);
        return out;
    }
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        const std::size_t chunk = (rows + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t first = w * chunk;
            const std::size_t last = std::min(rows, first + chunk);
            if (first >= last) break;
            pool.emplace_back(fill_rows, first, last);
        }
    }
    return out;
}

std::vector<ScanRecord> spectrum_scan(double c, const GridAxis& t_axis, double boundary_tol) {
    if (!std::isfinite(c)) throw DomainError("c must be finite");
    t_axis.validate("t");
    std::vector<ScanRecord> out;
    out.reserve(t_axis.count);
    for (std::size_t j = 0; j < t_axis.count; ++j) out.push_back(record_at(c, t_axis.at(j), boundary_tol));
    return out;
}

std::vector<std::array<double, kCrossingColumns.size()>> flatten(const Trajectory& traj) {
    std::vector<std::array<double, kCrossingColumns.size()>> rows;
    rows.reserve(traj.size());
    const auto& expect_h = traj.observables.at("H");
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const Vector& psi = traj.states[i].amplitudes;
        const Matrix& theta = traj.metrics[i];
        rows.push_back({traj.times[i], psi(0).real(), psi(0).imag(), psi(1).real(), psi(1).imag(),
                        theta(0, 0).real(), theta(0, 1).real(), theta(1, 1).real(), traj.theta_norms[i],
                        traj.energies[i].e_plus.real(), traj.energies[i].e_plus.imag(), expect_h[i].real(),
                        expect_h[i].imag()});
    }
    return rows;
}

CrossingScan crossing_scan(double c, const MetricProfile& profile, const Vector& psi0, double t_a, double t_b,
                           const CrossingOptions& options) {
    CrossingScan scan{run_crossing(c, profile, psi0, t_a, t_b, options), {}};
    scan.rows = flatten(scan.trajectory);
    return scan;
}

}  // namespace qhsim
