#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace turbbench {

// Single-channel raster stored row-major in native units (0..dyn_range).
// Intermediate results may leave that range; clamping happens on export.
class Image {
 public:
  Image() = default;
  Image(int width, int height, double dyn_range = 255.0, double fill = 0.0);
  Image(int width, int height, std::vector<double> data, double dyn_range = 255.0);

  int width() const { return width_; }
  int height() const { return height_; }
  double dyn_range() const { return dyn_range_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(int x, int y) { return data_[index(x, y)]; }
  double operator()(int x, int y) const { return data_[index(x, y)]; }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  std::span<double> pixels() { return data_; }
  std::span<const double> pixels() const { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool same_shape(const Image& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

  double mean() const;
  double variance() const;

  bool operator==(const Image& other) const = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  double dyn_range_ = 255.0;
  std::vector<double> data_;
};

// Throws InvalidArgument unless both sides are at least `min_side` pixels.
void require_min_size(const Image& img, int min_side, const char* what);

// Throws DimensionMismatch when the shapes differ.
void require_same_shape(const Image& a, const Image& b, const char* what);

// Per-pixel displacement in pixel units. Backward convention: output pixel
// (x, y) samples its source at (x + dx, y + dy).
struct WarpField {
  WarpField() = default;
  WarpField(int w, int h);

  int width = 0;
  int height = 0;
  std::vector<double> dx;
  std::vector<double> dy;

  std::size_t size() const { return dx.size(); }
  bool all_finite() const;
  double max_magnitude() const;
};

}  // namespace turbbench
