#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "turbbench/evalproto/metrics.hpp"

namespace turbbench {

enum class RowStatus { Ok, Error, MissingOutput, Timeout };

std::string to_string(RowStatus s);  // ok, error, missing_output, timeout
RowStatus parse_row_status(const std::string& text);

struct EvalRecord {
  std::string scene_id;
  double L_km = 0.0;
  int a = 0;
  int b = 0;
  double cn2 = 0.0;
  std::string stabilizer;
  std::string deblurrer;
  RowStatus status = RowStatus::Ok;
  std::optional<double> psnr_db;  // +inf for identical images
  std::optional<double> ssim;
  SsimMode ssim_mode = SsimMode::WindowedMean;
  double wall_ms = 0.0;

  using Key = std::tuple<std::string, double, int, int, std::string, std::string>;
  Key key() const { return {scene_id, L_km, a, b, stabilizer, deblurrer}; }
};

inline constexpr const char* kResultsHeader =
    "scene_id,L_km,a,b,cn2,stabilizer,deblurrer,status,psnr_db,ssim,ssim_mode,wall_ms";

std::string format_record(const EvalRecord& r);
// `where` prefixes error messages, e.g. "results.csv:12".
EvalRecord parse_record(const std::string& line, const std::string& where);

// Reads a results file; throws InvalidArgument naming the offending line on
// a bad header or row. A missing file yields no records.
std::vector<EvalRecord> read_results(const std::filesystem::path& csv);
void write_results(const std::filesystem::path& csv, const std::vector<EvalRecord>& records);

// One row per key (the ok row if any, otherwise the last one), sorted by
// (scene, L, a, b, stabilizer, deblurrer).
std::vector<EvalRecord> canonicalize(const std::vector<EvalRecord>& records);

// Canonical rows without the wall_ms column, one per line; used to compare
// runs whose timings differ.
std::string canonical_content(const std::vector<EvalRecord>& records);

}  // namespace turbbench
