#pragma once

#include <filesystem>
#include <vector>

#include "turbbench/cli/config.hpp"
#include "turbbench/evalproto/evaluate.hpp"

namespace turbbench {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitPartial = 2, kExitFatal = 3 };

extern const char* const kToolVersion;

DatasetManifest cmd_simulate(const RunConfig& cfg);

struct RunResult {
  EvalSummary summary;
  bool dataset_rebuilt = false;
};
// Builds the dataset unless an identical one exists, evaluates every pipeline,
// writes the report tables and run.json under results_dir.
RunResult cmd_run(const RunConfig& cfg);

// by_<grouping>.csv for each grouping plus summary.txt; returns the paths.
std::vector<std::filesystem::path> cmd_report(const std::filesystem::path& csv,
                                              const std::filesystem::path& out_dir);

// Full command line front end; returns the process exit code.
int run_cli(int argc, char** argv);

}  // namespace turbbench
