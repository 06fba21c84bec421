#pragma once

#include <vector>

namespace turbbench {

// Square, odd-sized convolution kernel; tap (0,0) is the top-left corner and
// the centre tap sits at (size/2, size/2).
class Kernel {
 public:
  Kernel() : Kernel(delta()) {}
  Kernel(int size, std::vector<double> taps);

  static Kernel delta();
  static Kernel box(int size);
  static Kernel gaussian(int size, double sigma);

  int size() const { return size_; }
  int radius() const { return size_ / 2; }
  double operator()(int i, int j) const { return taps_[j * size_ + i]; }
  const std::vector<double>& taps() const { return taps_; }

  double sum() const;
  bool all_finite() const;
  // Sum of taps weighted by squared distance from the centre, in pixels^2.
  double second_moment() const;

  // Throws InvalidArgument unless taps sum to 1 (1e-6) and are non-negative
  // up to -1e-12.
  void require_unit_gain(const char* what) const;

 private:
  int size_ = 1;
  std::vector<double> taps_;
};

}  // namespace turbbench
