#include "turbbench/turbsim/dataset.hpp"

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>

#include "turbbench/imgcore/image_io.hpp"
#include "turbbench/imgcore/parallel.hpp"
#include "turbbench/imgcore/text.hpp"
#include "turbbench/turbsim/seed.hpp"
#include "turbbench/turbsim/simulate.hpp"

namespace turbbench {

namespace fs = std::filesystem;
using nlohmann::json;

double interpret_cn2(int a, int b) {
  return parse_double(std::to_string(a) + "e" + std::to_string(-b));
}

std::string Combination::dir_name() const {
  return "L" + format_double(L_km) + "km_a" + std::to_string(a) + "_b" + std::to_string(b);
}

std::vector<Combination> SweepGrid::combinations() const {
  std::vector<Combination> out;
  out.reserve(size());
  for (double L : distances_km) {
    for (int a : a_values) {
      for (int b : b_values) out.push_back({L, a, b});
    }
  }
  return out;
}

void SweepGrid::validate() const {
  if (distances_km.empty() || a_values.empty() || b_values.empty()) {
    throw InvalidArgument("sweep grid lists must be non-empty");
  }
  for (double L : distances_km) {
    if (!(L > 0.0) || !std::isfinite(L)) throw InvalidArgument("sweep distances must be > 0");
  }
  for (int a : a_values) {
    if (a < 0) throw InvalidArgument("sweep a values must be >= 0");
  }
}

SweepGrid SweepGrid::parse(const std::string& text) {
  SweepGrid grid;
  if (text.empty() || text == "default") return grid;
  std::stringstream clauses(text);
  std::string clause;
  while (std::getline(clauses, clause, ';')) {
    if (clause.empty()) continue;
    const auto eq = clause.find('=');
    if (eq == std::string::npos) throw InvalidArgument("grid clause without '=': " + clause);
    const std::string key = clause.substr(0, eq);
    const auto values = split_csv(clause.substr(eq + 1));
    if (key == "L") {
      grid.distances_km.clear();
      for (const auto& v : values) grid.distances_km.push_back(parse_double(v));
    } else if (key == "a") {
      grid.a_values.clear();
      for (const auto& v : values) grid.a_values.push_back(parse_int(v));
    } else if (key == "b") {
      grid.b_values.clear();
      for (const auto& v : values) grid.b_values.push_back(parse_int(v));
    } else {
      throw InvalidArgument("unknown grid key '" + key + "' (expected L, a or b)");
    }
  }
  grid.validate();
  return grid;
}

std::string SweepGrid::to_string() const {
  auto join = [](const auto& values, auto fmt) {
    std::string s;
    for (std::size_t i = 0; i < values.size(); ++i) s += (i ? "," : "") + fmt(values[i]);
    return s;
  };
  return "L=" + join(distances_km, [](double v) { return format_double(v); }) +
         ";a=" + join(a_values, [](int v) { return std::to_string(v); }) +
         ";b=" + join(b_values, [](int v) { return std::to_string(v); });
}

Image center_crop(const Image& img, int size) {
  if (img.width() < size || img.height() < size) {
    throw InvalidArgument("image is " + std::to_string(img.width()) + "x" +
                          std::to_string(img.height()) + ", smaller than the " +
                          std::to_string(size) + "x" + std::to_string(size) + " crop");
  }
  const int x0 = (img.width() - size) / 2;
  const int y0 = (img.height() - size) / 2;
  Image out(size, size, img.dyn_range());
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) out(x, y) = img(x0 + x, y0 + y);
  }
  return out;
}

std::string frame_filename(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%03d.png", index);
  return buf;
}

void write_params_json(const fs::path& path, const TurbulenceParams& p,
                       const std::string& scene_id, const Combination& combo,
                       std::uint64_t seed) {
  json j;
  j["scene_id"] = scene_id;
  j["L_km"] = combo.L_km;
  j["a"] = combo.a;
  j["b"] = combo.b;
  j["cn2_interpretation"] = "a*10^-b";
  j["seed"] = seed;
  j["dataset_version"] = kDatasetVersion;
  j["path_length_m"] = p.path_length_m;
  j["cn2"] = p.cn2;
  j["aperture_m"] = p.aperture_m;
  j["focal_m"] = p.focal_m;
  j["wavelength_m"] = p.wavelength_m;
  j["num_frames"] = p.num_frames;
  j["noise_sigma"] = p.noise_sigma;
  j["pixel_pitch_m"] = p.pixel_pitch_m;
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

SequenceInfo read_params_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  SequenceInfo info;
  try {
    const json j = json::parse(in);
    TurbulenceParams& p = info.params;
    p.path_length_m = j.at("path_length_m").get<double>();
    p.cn2 = j.at("cn2").get<double>();
    p.aperture_m = j.at("aperture_m").get<double>();
    p.focal_m = j.at("focal_m").get<double>();
    p.wavelength_m = j.at("wavelength_m").get<double>();
    p.num_frames = j.at("num_frames").get<int>();
    p.noise_sigma = j.at("noise_sigma").get<double>();
    p.pixel_pitch_m = j.at("pixel_pitch_m").get<double>();
    info.scene_id = j.value("scene_id", std::string{});
    info.seed = j.value("seed", std::uint64_t{0});
    info.combo.L_km = j.value("L_km", p.path_length_m / 1000.0);
    info.combo.a = j.value("a", 0);
    info.combo.b = j.value("b", 0);
  } catch (const json::exception& e) {
    throw InvalidArgument(path.string() + ": " + e.what());
  }
  validate(info.params);
  return info;
}

Sequence load_sequence(const fs::path& dir) {
  const SequenceInfo info = read_params_json(dir / "params.json");
  Sequence seq;
  seq.params = info.params;
  seq.scene_id = info.scene_id;
  seq.seed = info.seed;
  for (int i = 0; i < info.params.num_frames; ++i) {
    seq.frames.push_back(load_image(dir / frame_filename(i)));
  }
  validate(seq);
  return seq;
}

Image load_ground_truth(const fs::path& dir) { return load_image(dir / "gt.png"); }

namespace {

bool has_image_extension(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return ext == ".png" || ext == ".pgm";
}

// Maps a loaded image to an integer-valued 8- or 16-bit raster.
Image to_storage_range(const Image& img) {
  if (img.dyn_range() == 255.0 || img.dyn_range() == 65535.0) return img;
  const double target = img.dyn_range() <= 255.0 ? 255.0 : 65535.0;
  Image out(img.width(), img.height(), target);
  for (std::size_t i = 0; i < img.size(); ++i) {
    out[i] = std::round(img[i] * target / img.dyn_range());
  }
  return out;
}

struct Scene {
  std::string id;
  Image gt;
};

std::string manifest_row(const ManifestEntry& e) {
  return e.scene_id + "," + format_double(e.combo.L_km) + "," + std::to_string(e.combo.a) + "," +
         std::to_string(e.combo.b) + "," + format_double(e.cn2) + "," + std::to_string(e.seed) +
         "," + e.path + "," + std::to_string(e.n_frames);
}

}  // namespace

void write_manifest(const DatasetManifest& manifest) {
  {
    std::ofstream csv(manifest.root / "manifest.csv", std::ios::trunc);
    if (!csv) throw IoError("cannot write " + (manifest.root / "manifest.csv").string());
    csv << kManifestHeader << "\n";
    for (const auto& e : manifest.entries) csv << manifest_row(e) << "\n";
  }
  json j;
  j["dataset_version"] = kDatasetVersion;
  j["sequences"] = manifest.entries.size();
  j["warnings"] = manifest.warnings;
  std::ofstream out(manifest.root / "manifest.json", std::ios::trunc);
  if (!out) throw IoError("cannot write " + (manifest.root / "manifest.json").string());
  out << j.dump(2) << "\n";
}

DatasetManifest read_manifest(const fs::path& manifest_csv) {
  std::ifstream in(manifest_csv);
  if (!in) throw IoError("cannot read " + manifest_csv.string());
  DatasetManifest manifest;
  manifest.root = manifest_csv.parent_path();
  std::string line;
  if (!std::getline(in, line) || split_csv(line) != split_csv(kManifestHeader)) {
    throw InvalidArgument(manifest_csv.string() + ":1: unexpected manifest header");
  }
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    try {
      if (f.size() != 8) throw InvalidArgument("expected 8 fields");
      ManifestEntry e;
      e.scene_id = f[0];
      e.combo = {parse_double(f[1]), parse_int(f[2]), parse_int(f[3])};
      e.cn2 = parse_double(f[4]);
      e.seed = parse_u64(f[5]);
      e.path = f[6];
      e.n_frames = parse_int(f[7]);
      manifest.entries.push_back(std::move(e));
    } catch (const InvalidArgument& err) {
      throw InvalidArgument(manifest_csv.string() + ":" + std::to_string(line_no) + ": " +
                            err.what());
    }
  }
  const fs::path json_path = manifest.root / "manifest.json";
  if (fs::exists(json_path)) {
    std::ifstream js(json_path);
    try {
      const json j = json::parse(js);
      manifest.warnings = j.value("warnings", std::vector<std::string>{});
    } catch (const json::exception&) {
      manifest.warnings.push_back("manifest.json is unreadable");
    }
  }
  return manifest;
}

DatasetManifest build_dataset(const fs::path& gt_dir, const SweepGrid& grid,
                              const fs::path& out_dir, std::uint64_t master_seed,
                              const DatasetOptions& options) {
  grid.validate();
  validate(options.base);
  if (options.crop_size < 8) throw InvalidArgument("crop_size must be >= 8");
  if (!fs::is_directory(gt_dir)) throw IoError("ground-truth directory not found: " + gt_dir.string());

  try {
    fs::create_directories(out_dir);
    const fs::path probe = out_dir / ".write_probe";
    std::ofstream(probe).put('x');
    if (!fs::exists(probe)) throw IoError("");
    fs::remove(probe);
  } catch (const std::exception&) {
    throw IoError("output directory is not writable: " + out_dir.string());
  }

  DatasetManifest manifest;
  manifest.root = out_dir;

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(gt_dir)) {
    if (entry.is_regular_file() && has_image_extension(entry.path())) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  std::vector<Scene> scenes;
  std::set<std::string> seen;
  for (const auto& file : files) {
    const std::string id = file.stem().string();
    if (id.find_first_of(",\"\n") != std::string::npos) {
      manifest.warnings.push_back("skipped " + file.filename().string() +
                                  ": scene id contains a comma, quote or newline");
      continue;
    }
    if (!seen.insert(id).second) {
      manifest.warnings.push_back("skipped " + file.filename().string() + ": duplicate scene id");
      continue;
    }
    try {
      scenes.push_back({id, to_storage_range(center_crop(load_image(file), options.crop_size))});
    } catch (const Error& e) {
      manifest.warnings.push_back("skipped " + file.filename().string() + ": " + e.what());
    }
  }
  for (const auto& w : manifest.warnings) spdlog::warn("{}", w);
  if (scenes.empty()) {
    throw InvalidArgument("no readable ground-truth images in " + gt_dir.string());
  }

  const auto combos = grid.combinations();
  const std::size_t n_tasks = scenes.size() * combos.size();
  std::vector<ManifestEntry> entries(n_tasks);
  std::vector<std::vector<std::string>> task_warnings(n_tasks);

  parallel_for(n_tasks, options.workers, [&](std::size_t t) {
    const Scene& scene = scenes[t / combos.size()];
    const Combination& combo = combos[t % combos.size()];
    TurbulenceParams p = options.base;
    p.path_length_m = combo.L_km * 1000.0;
    p.cn2 = combo.cn2();
    const std::uint64_t seed = sequence_seed(master_seed, scene.id, combo.L_km, combo.a, combo.b);

    const KernelReport report = long_exposure_kernel_for_r0(p, fried_parameter(p), options.kernel_size);
    if (report.energy_fraction < kMinKernelEnergy) {
      task_warnings[t].push_back(scene.id + "/" + combo.dir_name() + ": kernel support holds " +
                                 format_double(report.energy_fraction) + " of the PSF flux");
    }
    const Sequence seq = simulate_sequence(scene.gt, p, report.kernel, seed);

    const std::string rel = scene.id + "/" + combo.dir_name();
    const fs::path dir = out_dir / rel;
    fs::create_directories(dir);
    save_image(scene.gt, dir / "gt.png");
    for (int i = 0; i < p.num_frames; ++i) save_image(seq.frames[i], dir / frame_filename(i));
    write_params_json(dir / "params.json", p, scene.id, combo, seed);

    entries[t] = {scene.id, combo, p.cn2, seed, rel, p.num_frames};
  });

  for (auto& w : task_warnings) {
    for (auto& msg : w) {
      spdlog::warn("{}", msg);
      manifest.warnings.push_back(std::move(msg));
    }
  }
  std::sort(entries.begin(), entries.end(), [](const ManifestEntry& x, const ManifestEntry& y) {
    return std::tie(x.scene_id, x.combo.L_km, x.combo.a, x.combo.b) <
           std::tie(y.scene_id, y.combo.L_km, y.combo.a, y.combo.b);
  });
  manifest.entries = std::move(entries);
  write_manifest(manifest);
  return manifest;
}

}  // namespace turbbench
