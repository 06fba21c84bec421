#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "turbbench/evalproto/metrics.hpp"
#include "turbbench/evalproto/pipeline.hpp"
#include "turbbench/turbsim/dataset.hpp"

namespace turbbench {

// Schema violation; what() starts with the JSON pointer of the offending key.
class ConfigError : public InvalidArgument {
 public:
  ConfigError(const std::string& pointer, const std::string& message)
      : InvalidArgument(pointer + ": " + message), pointer_(pointer) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

struct RunConfig {
  std::filesystem::path gt_dir;
  std::filesystem::path dataset_dir;
  std::filesystem::path results_dir;
  SweepGrid grid;
  std::uint64_t master_seed = 0;
  std::vector<PipelineSpec> pipelines;
  SsimOptions metrics;
  int workers = 1;
  DatasetOptions simulation;  // workers is copied from `workers`

  std::filesystem::path manifest_path() const { return dataset_dir / "manifest.csv"; }
  std::filesystem::path results_csv() const { return results_dir / "results.csv"; }
  std::filesystem::path report_dir() const { return results_dir / "report"; }
};

// Relative paths resolve against base_dir. Unknown keys are errors.
RunConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);
// Syntax errors report line and column.
RunConfig load_config(const std::filesystem::path& path);

// Normalised form with every default filled in; parse_config accepts it.
nlohmann::json to_json(const RunConfig& cfg);
// The part of the config that determines the dataset bytes.
nlohmann::json dataset_fingerprint(const RunConfig& cfg);

// Throws ConfigError for an external pipeline whose program is not found.
void check_external_commands(const RunConfig& cfg);

std::vector<double> parse_r0_grid(const std::string& text);

}  // namespace turbbench
