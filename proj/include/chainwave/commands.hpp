#pragma once

// Subcommands behind the chainwave executable.  Each returns a process exit
// code and never throws for library errors.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chainwave/config.hpp"
#include "chainwave/solver.hpp"

namespace chainwave {

enum ExitCode : int {
  kExitOk = 0,
  kExitPropertyFailure = 1,
  kExitConfigError = 2,
  kExitSolverError = 3,
  kExitIoError = 4,
  kExitWindowError = 5,
};

int exit_code_for(ErrorKind kind);

/// Command-line overrides of the config file.
struct CommandOptions {
  std::optional<std::string> output;
  std::optional<OutputFormat> format;
  std::optional<double> epsilon;
  bool quiet = false;
};

/// Exact header of the sweep table.
inline constexpr std::string_view kSweepHeader =
    "epsilon,l2_error,sup_error,order_l2,order_sup,iterations,tw_residual,sigma_min,residual_norm_RS,tail_rate";
inline constexpr std::string_view kProfileHeader = "x,W0,W_eps,V_eps";
inline constexpr std::string_view kTransportHeader = "J,dt,T,transport_error,energy_drift,momentum_drift";

/// Shortest round-trip decimal form.
std::string format_number(double value);

std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string sweep_json(const std::vector<SweepRow>& rows);
std::string profile_csv(const WaveSolution& solution);
std::string solution_json(const WaveSolution& solution, bool with_profiles);

int cmd_solve(const RunConfig& config, const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& config, const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_simulate(const RunConfig& config, const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& config, const CommandOptions& options, std::ostream& out, std::ostream& err);

/// Loads the config and dispatches on `command` (solve | sweep | simulate | verify).
int run_command(std::string_view command, const std::filesystem::path& config_path, const CommandOptions& options,
                std::ostream& out, std::ostream& err);

}  // namespace chainwave
