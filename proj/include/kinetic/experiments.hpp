#pragma once

#include <filesystem>
#include <ostream>
#include <string>

#include "kinetic/config.hpp"

namespace kinetic {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitRuntime = 3, kExitSelfCheck = 4 };

inline constexpr const char* kToolVersion = "0.1.0";

struct ExperimentOutcome {
  int exit_code = kExitOk;
  std::filesystem::path out_dir;
  std::string message;
};

// Runs the named canned experiment and writes CSV files, manifest.json and
// timings.json under `out_dir` (created if needed). Domain and IO failures
// become kExitRuntime; a failed internal consistency check becomes
// kExitSelfCheck. Results do not depend on `workers`.
ExperimentOutcome run_experiment(const RunConfig& cfg, unsigned workers, const std::filesystem::path& out_dir,
                                 std::ostream& log);

}  // namespace kinetic
