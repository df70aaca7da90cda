#pragma once

#include <iosfwd>
#include <string_view>

#include "aoi/cli/config.hpp"

namespace aoi::cli {

enum class Command { Eval, Simulate, Sweep, Optimize };

std::string_view to_string(Command c);

// Process exit codes. Divergent results are data, not errors.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSimulation = 3;
inline constexpr int kExitNoFeasible = 4;

/// Runs one command. Reports go to `out` unless the config names an output
/// path; diagnostics go to `err`. Returns the process exit code.
int run_command(Command cmd, const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace aoi::cli
