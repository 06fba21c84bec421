#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "turbbench/imgcore/image.hpp"

namespace turbbench {

// Physical imaging scenario. Lengths are meters, cn2 is m^(-2/3).
struct TurbulenceParams {
  double path_length_m = 1000.0;
  double cn2 = 0.0;
  double aperture_m = 0.054;
  double focal_m = 0.3;
  double wavelength_m = 0.525e-6;
  int num_frames = 50;
  double noise_sigma = 0.0;
  double pixel_pitch_m = 4e-6;

  bool operator==(const TurbulenceParams&) const = default;
};

// Throws InvalidArgument when a field is out of its physical range.
void validate(const TurbulenceParams& p);

struct Sequence {
  std::vector<Image> frames;
  TurbulenceParams params;
  std::string scene_id;
  std::uint64_t seed = 0;
};

// Checks frame count against params and that all frames share a shape.
void validate(const Sequence& seq);

}  // namespace turbbench
