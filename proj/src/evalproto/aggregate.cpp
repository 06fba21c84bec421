#include "turbbench/evalproto/aggregate.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <variant>

#include "turbbench/imgcore/errors.hpp"
#include "turbbench/imgcore/text.hpp"

namespace turbbench {

namespace {

struct Moments {
  double mean = std::numeric_limits<double>::quiet_NaN();
  double sd = std::numeric_limits<double>::quiet_NaN();
};

Moments moments(const std::vector<double>& v) {
  Moments m;
  if (v.empty()) return m;
  double sum = 0.0;
  for (double x : v) sum += x;
  m.mean = sum / static_cast<double>(v.size());
  if (v.size() < 2) {
    m.sd = 0.0;
    return m;
  }
  double ss = 0.0;
  for (double x : v) ss += (x - m.mean) * (x - m.mean);
  m.sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
  return m;
}

using GroupKey = std::variant<double, std::string>;

GroupKey key_of(const EvalRecord& r, GroupBy by) {
  switch (by) {
    case GroupBy::Distance:
      return r.L_km;
    case GroupBy::Cn2:
      return r.cn2;
    case GroupBy::Stabilizer:
      return r.stabilizer;
    case GroupBy::Overall:
    default:
      return std::string("all");
  }
}

std::string label_of(const GroupKey& k) {
  if (const auto* d = std::get_if<double>(&k)) return format_double(*d);
  return std::get<std::string>(k);
}

std::string fixed(double v, int digits) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string to_string(GroupBy g) {
  switch (g) {
    case GroupBy::Distance:
      return "distance";
    case GroupBy::Cn2:
      return "cn2";
    case GroupBy::Stabilizer:
      return "stabilizer";
    case GroupBy::Overall:
    default:
      return "overall";
  }
}

GroupBy parse_group_by(const std::string& text) {
  for (GroupBy g : kAllGroupings) {
    if (to_string(g) == text) return g;
  }
  throw InvalidArgument("unknown grouping '" + text + "' (overall, distance, cn2, stabilizer)");
}

std::vector<GroupStats> aggregate(const std::vector<EvalRecord>& records, GroupBy by) {
  struct Acc {
    std::vector<double> psnr, ssim;
    std::size_t n = 0, n_inf = 0;
  };
  std::map<GroupKey, Acc> groups;
  for (const auto& r : canonicalize(records)) {
    if (r.status != RowStatus::Ok) continue;
    Acc& acc = groups[key_of(r, by)];
    ++acc.n;
    if (std::isinf(*r.psnr_db)) {
      ++acc.n_inf;
    } else {
      acc.psnr.push_back(*r.psnr_db);
    }
    acc.ssim.push_back(*r.ssim);
  }
  std::vector<GroupStats> out;
  for (const auto& [key, acc] : groups) {
    const Moments p = moments(acc.psnr);
    const Moments s = moments(acc.ssim);
    out.push_back({label_of(key), acc.n, acc.n_inf, p.mean, p.sd, s.mean, s.sd});
  }
  return out;
}

std::vector<GroupStats> aggregate(const std::filesystem::path& csv, GroupBy by) {
  if (!std::filesystem::exists(csv)) throw IoError("no such results file: " + csv.string());
  return aggregate(read_results(csv), by);
}

void write_aggregate_csv(const std::filesystem::path& path, const std::vector<GroupStats>& stats) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << kAggregateHeader << '\n';
  for (const auto& g : stats) {
    out << g.group << ',' << g.n << ',' << g.n_inf_psnr << ',' << format_double(g.mean_psnr) << ','
        << format_double(g.sd_psnr) << ',' << format_double(g.mean_ssim) << ','
        << format_double(g.sd_ssim) << '\n';
  }
}

std::string format_summary(const std::vector<EvalRecord>& records) {
  std::size_t ok = 0;
  for (const auto& r : canonicalize(records)) ok += r.status == RowStatus::Ok ? 1 : 0;
  std::string text = "rows: " + std::to_string(canonicalize(records).size()) + " (ok " +
                     std::to_string(ok) + ")\n";
  for (GroupBy by : kAllGroupings) {
    text += "\n[" + to_string(by) + "]\n";
    char line[256];
    std::snprintf(line, sizeof line, "%-24s %6s %6s %10s %8s %8s %8s\n", "group", "n", "inf",
                  "psnr", "sd", "ssim", "sd");
    text += line;
    for (const auto& g : aggregate(records, by)) {
      std::snprintf(line, sizeof line, "%-24s %6zu %6zu %10s %8s %8s %8s\n", g.group.c_str(), g.n,
                    g.n_inf_psnr, fixed(g.mean_psnr, 3).c_str(), fixed(g.sd_psnr, 3).c_str(),
                    fixed(g.mean_ssim, 4).c_str(), fixed(g.sd_ssim, 4).c_str());
      text += line;
    }
  }
  return text;
}

}  // namespace turbbench
