#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "turbbench/imgcore/errors.hpp"
#include "turbbench/imgcore/image.hpp"
#include "turbbench/imgcore/sequence.hpp"
#include "turbbench/turbsim/optics.hpp"

namespace turbbench {

// C_n^2 = a * 10^(-b) m^(-2/3), correctly rounded from the decimal literal.
double interpret_cn2(int a, int b);

struct Combination {
  double L_km = 1.0;
  int a = 1;
  int b = 14;

  double cn2() const { return interpret_cn2(a, b); }
  // "L<km>km_a<a>_b<b>", e.g. L2km_a5_b15.
  std::string dir_name() const;
  bool operator==(const Combination&) const = default;
};

struct SweepGrid {
  std::vector<double> distances_km{1, 2, 3, 4};
  std::vector<int> a_values{1, 3, 5, 7, 9};
  std::vector<int> b_values{14, 15, 16, 17};

  std::size_t size() const {
    return distances_km.size() * a_values.size() * b_values.size();
  }
  // Ordered by L, then a, then b.
  std::vector<Combination> combinations() const;
  void validate() const;

  // "default" or "L=1,2;a=1,3;b=14,15" (missing keys keep their defaults).
  static SweepGrid parse(const std::string& text);
  std::string to_string() const;
};

struct DatasetOptions {
  // Optics and frame count; path_length_m and cn2 are set per combination.
  TurbulenceParams base;
  int crop_size = 256;
  int kernel_size = kDefaultKernelSize;
  int workers = 1;
};

struct ManifestEntry {
  std::string scene_id;
  Combination combo;
  double cn2 = 0.0;
  std::uint64_t seed = 0;
  std::string path;  // relative to the dataset root
  int n_frames = 0;
};

struct DatasetManifest {
  std::filesystem::path root;
  std::vector<ManifestEntry> entries;
  std::vector<std::string> warnings;

  std::filesystem::path sequence_dir(const ManifestEntry& e) const { return root / e.path; }
};

inline constexpr const char* kManifestHeader = "scene_id,L_km,a,b,cn2,seed,path,n_frames";

// Writes <out_dir>/<scene>/<combo>/{gt.png, frame_NNN.png, params.json} for
// every readable ground truth in gt_dir and every grid combination, then
// manifest.csv and manifest.json (with warnings). Unreadable or too-small
// images are skipped with a warning; an unwritable out_dir throws IoError.
DatasetManifest build_dataset(const std::filesystem::path& gt_dir, const SweepGrid& grid,
                              const std::filesystem::path& out_dir, std::uint64_t master_seed,
                              const DatasetOptions& options = {});

void write_manifest(const DatasetManifest& manifest);
DatasetManifest read_manifest(const std::filesystem::path& manifest_csv);

// Centre crop to size x size. Throws InvalidArgument if the image is smaller.
Image center_crop(const Image& img, int size);

std::string frame_filename(int index);

// Sequence directory I/O.
void write_params_json(const std::filesystem::path& path, const TurbulenceParams& p,
                       const std::string& scene_id, const Combination& combo,
                       std::uint64_t seed);
struct SequenceInfo {
  TurbulenceParams params;
  std::string scene_id;
  Combination combo;
  std::uint64_t seed = 0;
};
SequenceInfo read_params_json(const std::filesystem::path& path);
Sequence load_sequence(const std::filesystem::path& dir);
Image load_ground_truth(const std::filesystem::path& dir);

}  // namespace turbbench
