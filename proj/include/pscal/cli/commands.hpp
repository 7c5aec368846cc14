#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "pscal/cli/config.hpp"

namespace pscal::cli {

/// Command-line values that take precedence over the config file.
struct Overrides {
  std::optional<std::filesystem::path> out;
  std::optional<double> epsilon;
  std::optional<double> epsilon0;
  std::optional<double> tol;
  std::optional<int> max_iter;
};

void apply_overrides(RunConfig& cfg, const Overrides& o);

/// Exit codes shared by all commands.
enum ExitCode : int { exit_ok = 0, exit_error = 1, exit_failed = 2, exit_constrained = 3 };

struct CommandResult {
  int exit_code = exit_ok;
  nlohmann::json report;
};

/// Runs every applicable certificate. 0 if any passes, 2 if all fail.
/// Writes feasibility.json.
CommandResult cmd_feasibility(const RunConfig& cfg, std::ostream& log);

/// Minimizes, verifies and writes solution.csv and summary.json.
/// 0 converged and verified, 3 converged with a binding constraint,
/// 2 not converged or not verified.
CommandResult cmd_solve(const RunConfig& cfg, std::ostream& log);

/// Re-verifies a persisted solution (column u). 0 pass, 2 fail.
/// Writes verification.json.
CommandResult cmd_verify(const RunConfig& cfg, const std::filesystem::path& solution, std::ostream& log);

/// Canonical-variation scan. Writes scan.csv and canonical.json.
/// 0 pass, 2 fail or max scal_F <= 0.
CommandResult cmd_scan_canonical(const RunConfig& cfg, std::ostream& log);

/// Base constants: volume, first eigenvalue, scalar curvature range.
CommandResult cmd_spectrum(const RunConfig& cfg, std::ostream& log);

/// Loads the config, dispatches, prints the JSON report to `out` and errors
/// to `err`. Library errors map to exit code 1.
int run_command(const std::string& command, const std::filesystem::path& config, const Overrides& overrides,
                const std::optional<std::filesystem::path>& solution, std::ostream& out, std::ostream& err);

}  // namespace pscal::cli
