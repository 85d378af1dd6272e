#pragma once

#include <iosfwd>
#include <string>

#include "ccce_cli/config.hpp"

namespace ccce::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitInfeasible = 3;

// Each command writes its CSVs under config.output_dir and a short report to
// `out`. Errors propagate as exceptions; run_command maps them to exit codes.
void cmd_solve(const RunConfig& config, std::ostream& out);
void cmd_sweep_alpha(const RunConfig& config, std::ostream& out);
void cmd_acquire(const RunConfig& config, std::ostream& out);
void cmd_nash(const RunConfig& config, std::ostream& out);

// Loads the config, dispatches `command` and returns the process exit code.
int run_command(const std::string& command, const std::string& config_path,
                const Overrides& overrides, std::ostream& out,
                std::ostream& err);

}  // namespace ccce::cli
