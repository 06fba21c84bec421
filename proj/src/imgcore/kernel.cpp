#include "turbbench/imgcore/kernel.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "turbbench/imgcore/errors.hpp"

namespace turbbench {

Kernel::Kernel(int size, std::vector<double> taps) : size_(size), taps_(std::move(taps)) {
  if (size < 1 || size % 2 == 0) {
    throw InvalidArgument("kernel size must be odd and positive, got " + std::to_string(size));
  }
  if (taps_.size() != static_cast<std::size_t>(size) * size) {
    throw InvalidArgument("kernel tap count does not match size");
  }
}

Kernel Kernel::delta() { return Kernel(1, {1.0}); }

Kernel Kernel::box(int size) {
  const double v = 1.0 / (static_cast<double>(size) * size);
  return Kernel(size, std::vector<double>(static_cast<std::size_t>(size) * size, v));
}

Kernel Kernel::gaussian(int size, double sigma) {
  if (!(sigma > 0.0)) throw InvalidArgument("gaussian kernel sigma must be positive");
  std::vector<double> taps(static_cast<std::size_t>(size) * size);
  const int r = size / 2;
  double total = 0.0;
  for (int j = 0; j < size; ++j) {
    for (int i = 0; i < size; ++i) {
      const double d2 = (i - r) * (i - r) + (j - r) * (j - r);
      taps[j * size + i] = std::exp(-d2 / (2.0 * sigma * sigma));
      total += taps[j * size + i];
    }
  }
  for (double& t : taps) t /= total;
  return Kernel(size, std::move(taps));
}

double Kernel::sum() const { return std::accumulate(taps_.begin(), taps_.end(), 0.0); }

bool Kernel::all_finite() const {
  for (double t : taps_) {
    if (!std::isfinite(t)) return false;
  }
  return true;
}

double Kernel::second_moment() const {
  const int r = radius();
  double m = 0.0;
  for (int j = 0; j < size_; ++j) {
    for (int i = 0; i < size_; ++i) {
      m += taps_[j * size_ + i] * static_cast<double>((i - r) * (i - r) + (j - r) * (j - r));
    }
  }
  return m;
}

void Kernel::require_unit_gain(const char* what) const {
  if (!all_finite()) throw InvalidArgument(std::string(what) + ": kernel has non-finite taps");
  if (std::abs(sum() - 1.0) > 1e-6) {
    throw InvalidArgument(std::string(what) + ": kernel taps must sum to 1");
  }
  for (double t : taps_) {
    if (t < -1e-12) throw InvalidArgument(std::string(what) + ": kernel has negative taps");
  }
}

}  // namespace turbbench
