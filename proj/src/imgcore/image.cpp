#include "turbbench/imgcore/image.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "turbbench/imgcore/errors.hpp"
#include "turbbench/imgcore/sequence.hpp"

namespace turbbench {

namespace {

void check_shape(int width, int height, double dyn_range) {
  if (width <= 0 || height <= 0) {
    throw InvalidArgument("image dimensions must be positive, got " +
                          std::to_string(width) + "x" + std::to_string(height));
  }
  if (!(dyn_range > 0.0) || !std::isfinite(dyn_range)) {
    throw InvalidArgument("image dynamic range must be positive and finite");
  }
}

}  // namespace

Image::Image(int width, int height, double dyn_range, double fill)
    : width_(width), height_(height), dyn_range_(dyn_range) {
  check_shape(width, height, dyn_range);
  data_.assign(static_cast<std::size_t>(width) * height, fill);
}

Image::Image(int width, int height, std::vector<double> data, double dyn_range)
    : width_(width), height_(height), dyn_range_(dyn_range), data_(std::move(data)) {
  check_shape(width, height, dyn_range);
  if (data_.size() != static_cast<std::size_t>(width) * height) {
    throw InvalidArgument("image data length " + std::to_string(data_.size()) +
                          " does not match " + std::to_string(width) + "x" +
                          std::to_string(height));
  }
  for (double v : data_) {
    if (!std::isfinite(v)) throw InvalidArgument("image data contains non-finite values");
  }
}

double Image::mean() const {
  if (data_.empty()) return 0.0;
  return std::accumulate(data_.begin(), data_.end(), 0.0) / static_cast<double>(data_.size());
}

double Image::variance() const {
  if (data_.empty()) return 0.0;
  const double m = mean();
  double acc = 0.0;
  for (double v : data_) acc += (v - m) * (v - m);
  return acc / static_cast<double>(data_.size());
}

void require_min_size(const Image& img, int min_side, const char* what) {
  if (img.width() < min_side || img.height() < min_side) {
    throw InvalidArgument(std::string(what) + ": image must be at least " +
                          std::to_string(min_side) + "x" + std::to_string(min_side) +
                          ", got " + std::to_string(img.width()) + "x" +
                          std::to_string(img.height()));
  }
}

void require_same_shape(const Image& a, const Image& b, const char* what) {
  if (!a.same_shape(b)) {
    throw DimensionMismatch(std::string(what) + ": " + std::to_string(a.width()) + "x" +
                            std::to_string(a.height()) + " vs " + std::to_string(b.width()) +
                            "x" + std::to_string(b.height()));
  }
}

WarpField::WarpField(int w, int h) : width(w), height(h) {
  if (w <= 0 || h <= 0) throw InvalidArgument("warp field dimensions must be positive");
  dx.assign(static_cast<std::size_t>(w) * h, 0.0);
  dy.assign(static_cast<std::size_t>(w) * h, 0.0);
}

bool WarpField::all_finite() const {
  for (std::size_t i = 0; i < dx.size(); ++i) {
    if (!std::isfinite(dx[i]) || !std::isfinite(dy[i])) return false;
  }
  return true;
}

double WarpField::max_magnitude() const {
  double m = 0.0;
  for (std::size_t i = 0; i < dx.size(); ++i) m = std::max(m, std::hypot(dx[i], dy[i]));
  return m;
}

void validate(const TurbulenceParams& p) {
  auto fail = [](const std::string& field, const std::string& rule) {
    throw InvalidArgument("TurbulenceParams." + field + " " + rule);
  };
  if (!(p.path_length_m > 0.0)) fail("path_length_m", "must be > 0");
  if (!(p.cn2 >= 0.0) || !std::isfinite(p.cn2)) fail("cn2", "must be >= 0");
  if (!(p.aperture_m > 0.0)) fail("aperture_m", "must be > 0");
  if (!(p.focal_m > 0.0)) fail("focal_m", "must be > 0");
  if (!(p.wavelength_m > 0.0)) fail("wavelength_m", "must be > 0");
  if (p.num_frames < 1) fail("num_frames", "must be >= 1");
  if (!(p.noise_sigma >= 0.0)) fail("noise_sigma", "must be >= 0");
  if (!(p.pixel_pitch_m > 0.0)) fail("pixel_pitch_m", "must be > 0");
}

void validate(const Sequence& seq) {
  if (seq.frames.size() != static_cast<std::size_t>(seq.params.num_frames)) {
    throw InvalidArgument("sequence has " + std::to_string(seq.frames.size()) +
                          " frames but params.num_frames is " +
                          std::to_string(seq.params.num_frames));
  }
  for (const auto& f : seq.frames) require_same_shape(seq.frames.front(), f, "sequence frames");
}

}  // namespace turbbench
