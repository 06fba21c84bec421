#include "turbbench/evalproto/results_csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

#include "turbbench/imgcore/errors.hpp"
#include "turbbench/imgcore/text.hpp"

namespace turbbench {

namespace {

constexpr std::size_t kFieldCount = 12;

std::string format_optional(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

std::optional<double> parse_optional(const std::string& text) {
  if (text.empty()) return std::nullopt;
  return parse_double(text);
}

std::string format_ms(double ms) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", ms);
  return buf;
}

}  // namespace

std::string to_string(RowStatus s) {
  switch (s) {
    case RowStatus::Ok:
      return "ok";
    case RowStatus::Error:
      return "error";
    case RowStatus::MissingOutput:
      return "missing_output";
    case RowStatus::Timeout:
    default:
      return "timeout";
  }
}

RowStatus parse_row_status(const std::string& text) {
  if (text == "ok") return RowStatus::Ok;
  if (text == "error") return RowStatus::Error;
  if (text == "missing_output") return RowStatus::MissingOutput;
  if (text == "timeout") return RowStatus::Timeout;
  throw InvalidArgument("unknown status '" + text + "'");
}

std::string format_record(const EvalRecord& r) {
  std::string line;
  line += r.scene_id + ',' + format_double(r.L_km) + ',' + std::to_string(r.a) + ',' +
          std::to_string(r.b) + ',' + format_double(r.cn2) + ',' + r.stabilizer + ',' +
          r.deblurrer + ',' + to_string(r.status) + ',' + format_optional(r.psnr_db) + ',' +
          format_optional(r.ssim) + ',' + to_string(r.ssim_mode) + ',' + format_ms(r.wall_ms);
  return line;
}

EvalRecord parse_record(const std::string& line, const std::string& where) {
  const auto f = split_csv(line);
  if (f.size() != kFieldCount) {
    throw InvalidArgument(where + ": expected " + std::to_string(kFieldCount) + " fields, got " +
                          std::to_string(f.size()));
  }
  try {
    EvalRecord r;
    r.scene_id = f[0];
    r.L_km = parse_double(f[1]);
    r.a = parse_int(f[2]);
    r.b = parse_int(f[3]);
    r.cn2 = parse_double(f[4]);
    r.stabilizer = f[5];
    r.deblurrer = f[6];
    r.status = parse_row_status(f[7]);
    r.psnr_db = parse_optional(f[8]);
    r.ssim = parse_optional(f[9]);
    r.ssim_mode = parse_ssim_mode(f[10]);
    r.wall_ms = parse_double(f[11]);
    if (r.scene_id.empty()) throw InvalidArgument("empty scene_id");
    if (r.status == RowStatus::Ok && (!r.psnr_db || !r.ssim)) {
      throw InvalidArgument("ok row without metrics");
    }
    if (r.ssim && (std::isnan(*r.ssim) || *r.ssim < -1.0 || *r.ssim > 1.0)) {
      throw InvalidArgument("ssim outside [-1, 1]");
    }
    return r;
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(where + ": " + e.what());
  }
}

std::vector<EvalRecord> read_results(const std::filesystem::path& csv) {
  std::vector<EvalRecord> out;
  std::ifstream in(csv);
  if (!in) return out;
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) return out;
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kResultsHeader) {
    throw InvalidArgument(csv.string() + ":1: unexpected header '" + line + "'");
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    out.push_back(parse_record(line, csv.string() + ":" + std::to_string(line_no)));
  }
  return out;
}

void write_results(const std::filesystem::path& csv, const std::vector<EvalRecord>& records) {
  if (csv.has_parent_path()) std::filesystem::create_directories(csv.parent_path());
  const auto tmp = std::filesystem::path(csv.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << kResultsHeader << '\n';
    for (const auto& r : records) out << format_record(r) << '\n';
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, csv);
}

std::vector<EvalRecord> canonicalize(const std::vector<EvalRecord>& records) {
  std::map<EvalRecord::Key, EvalRecord> by_key;
  for (const auto& r : records) {
    auto [it, inserted] = by_key.try_emplace(r.key(), r);
    if (!inserted && (it->second.status != RowStatus::Ok || r.status == RowStatus::Ok)) {
      it->second = r;
    }
  }
  std::vector<EvalRecord> out;
  out.reserve(by_key.size());
  for (auto& [key, r] : by_key) out.push_back(std::move(r));
  return out;
}

std::string canonical_content(const std::vector<EvalRecord>& records) {
  std::string text;
  for (auto r : canonicalize(records)) {
    r.wall_ms = 0.0;
    std::string line = format_record(r);
    line.erase(line.rfind(','));
    text += line + '\n';
  }
  return text;
}

}  // namespace turbbench
