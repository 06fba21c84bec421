#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "turbbench/evalproto/results_csv.hpp"

namespace turbbench {

enum class GroupBy { Overall, Distance, Cn2, Stabilizer };

std::string to_string(GroupBy g);  // overall, distance, cn2, stabilizer
GroupBy parse_group_by(const std::string& text);
inline constexpr GroupBy kAllGroupings[] = {GroupBy::Overall, GroupBy::Distance, GroupBy::Cn2,
                                            GroupBy::Stabilizer};

// Statistics over the ok rows of one group. PSNR moments skip infinite
// values, which are counted in n_inf_psnr; standard deviations use n - 1 and
// are 0 for a single value. Moments without data are NaN.
struct GroupStats {
  std::string group;
  std::size_t n = 0;
  std::size_t n_inf_psnr = 0;
  double mean_psnr = 0.0;
  double sd_psnr = 0.0;
  double mean_ssim = 0.0;
  double sd_ssim = 0.0;
};

// Groups are ordered numerically for Distance and Cn2, by name otherwise.
std::vector<GroupStats> aggregate(const std::vector<EvalRecord>& records, GroupBy by);
std::vector<GroupStats> aggregate(const std::filesystem::path& csv, GroupBy by);

inline constexpr const char* kAggregateHeader =
    "group,n,n_inf_psnr,mean_psnr,sd_psnr,mean_ssim,sd_ssim";
void write_aggregate_csv(const std::filesystem::path& path, const std::vector<GroupStats>& stats);

// Plain-text report with one table per grouping.
std::string format_summary(const std::vector<EvalRecord>& records);

}  // namespace turbbench
