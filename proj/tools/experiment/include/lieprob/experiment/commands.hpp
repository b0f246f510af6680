#pragma once

// Subcommands of the lieprob tool. Each returns a process exit code and
// reports failures on `err`:
//   0 success, 1 a verification check failed, 2 configuration error,
//   3 infeasible constraints or inconsistent data, 4 numerical failure.

#include <filesystem>
#include <functional>
#include <ostream>
#include <vector>

#include "lieprob/experiment/config.hpp"

namespace lieprob::experiment {

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitConfig = 2,
  kExitInfeasible = 3,
  kExitNumerical = 4,
};

/// samples_rs.csv, samples_xy.csv, mean_xy.csv, manifest.json
int cmd_solve(const RunConfig& config, const std::filesystem::path& out, std::ostream& err);

/// convergence.csv, manifest.json
int cmd_convergence(const RunConfig& config, const std::vector<std::size_t>& design_sizes,
                    const std::filesystem::path& out, std::ostream& err);

/// verify.json, manifest.json; exit 1 if any check fails.
int cmd_verify(const RunConfig& config, const std::filesystem::path& out, std::ostream& err);

/// baseline_mean.csv, ancillarity.json, manifest.json
int cmd_baseline(const RunConfig& config, double sigma, const std::filesystem::path& out, std::ostream& err);

/// Runs `body` and maps exceptions to exit codes, printing the message.
int run_guarded(const std::function<int()>& body, std::ostream& err);

/// "4,8,16,32" -> {4, 8, 16, 32}; throws ConfigError on malformed input.
[[nodiscard]] std::vector<std::size_t> parse_design_sizes(const std::string& text);

/// Directory used when --out is not given: $LIEPROB_OUT_ROOT/<command>, or
/// ./lieprob_out/<command>; config `run.out` takes precedence over both.
[[nodiscard]] std::filesystem::path default_output_dir(const RunConfig& config, const std::string& command);

}  // namespace lieprob::experiment
