#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "qhsim/errors.hpp"
#include "qhsim/metric.hpp"
#include "qhsim/scan.hpp"

namespace qhsim::cli {

class UsageError : public InputError {
public:
    using InputError::InputError;
    const char* kind() const noexcept override { return "UsageError"; }
};

// --help was requested; what() holds the help text.
class HelpRequested : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Subcommand { PhaseDiagram, Spectrum, Evolve, Metric, Perturb };
enum class XiMode { MinimalProfile, Constant };
enum class Format { Csv, Json };

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitIo = 4;

struct RunConfig {
    Subcommand subcommand = Subcommand::PhaseDiagram;

    double c = 0.75;
    double t = 0.0;  // point for `metric`

    GridSpec grid{{-2.0, 3.0, 101}, {-2.0, 2.0, 101}};

    double dt = 1e-3;
    double window_start = -1.5;
    double window_end = 0.0;
    std::vector<double> psi0{1.0, 0.0, 0.0, 0.0};  // re0, im0, re1, im1

    DysonScheme scheme = DysonScheme::HermitianSqrt;
    double u0 = 1.0;
    XiMode xi_mode = XiMode::MinimalProfile;
    double xi0 = 0.0;
    std::optional<std::vector<std::vector<double>>> theta0;

    std::string family = "benchmark";  // or a JSON file with h0, h1
    std::vector<double> gammas{0.4, 0.2, 0.1};

    std::string output = "-";
    std::optional<Format> format;  // default depends on the subcommand

    double boundary_tol = 0.0;
    double fd_step = 0.0;  // <= 0 selects the step rule 1e-6 * max(1, |t|)

    Format effective_format() const;
};

/// Defaults, then the flat JSON file named by --config, then flags.
/// Throws UsageError naming the offending key, HelpRequested for --help.
RunConfig parse_config(const std::vector<std::string>& args);

/// Overlay a flat JSON object on `config`; unknown keys are rejected.
void apply_json(RunConfig& config, const nlohmann::json& object);

/// Every key of the effective configuration, including the subcommand.
nlohmann::json config_to_json(const RunConfig& config);

/// Compact JSON with sorted keys and numbers printed as format_number does.
std::string canonical_dump(const nlohmann::json& value);

/// 17 significant digits, "0" for both zeros.
std::string format_number(double x);

/// Produce the artifact text for `config` without touching the filesystem.
std::string render(const RunConfig& config);

/// Render and write the artifact. Returns the process exit code; failures
/// print a one-line JSON diagnostic to `diagnostics`.
int run(const RunConfig& config, std::ostream& diagnostics);

/// Whole command line: parse, run, map errors to exit codes.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qhsim::cli
