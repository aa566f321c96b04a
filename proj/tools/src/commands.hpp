#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "run_config.hpp"

namespace afgas::cli {

enum ExitCode : int { kOk = 0, kInvariantViolation = 1, kSolverFailure = 2, kConfigError = 3 };

struct CommandOptions {
  bool plot = false;
  std::ostream* log = nullptr;  // progress and tables; null for silence
};

// Each command writes into cfg.out (created if missing). Outputs other than
// timing.json are deterministic for a fixed config and seed.
int cmd_solve(const RunConfig& cfg, const CommandOptions& opt);
int cmd_thermo(const RunConfig& cfg, const CommandOptions& opt);
int cmd_tf(const RunConfig& cfg, const CommandOptions& opt);
int cmd_lda(const RunConfig& cfg, const CommandOptions& opt);
/// Runs the quick invariant suite; 1 on any violation.
int cmd_check(const RunConfig& cfg, const CommandOptions& opt);

/// Dispatches by name and maps exceptions to exit codes (2 solver, 3 config).
int run_command(const std::string& name, const RunConfig& cfg, const CommandOptions& opt);

}  // namespace afgas::cli
