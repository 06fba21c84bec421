#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "turbbench/imgcore/image.hpp"

namespace turbbench {

// Linear map from an n-pixel image to components() values per pixel, stored
// pixel-major (p[i * components() + c]).
class GradientOperator {
 public:
  virtual ~GradientOperator() = default;
  virtual std::size_t pixels() const = 0;
  virtual int components() const = 0;
  virtual void apply(std::span<const double> u, std::span<double> out) const = 0;
  virtual void adjoint(std::span<const double> p, std::span<double> out) const = 0;
  // Upper bound on ||G||^2.
  virtual double norm_sq_bound() const = 0;
};

// Forward differences with a zero difference across the last row/column.
class LocalGradient final : public GradientOperator {
 public:
  LocalGradient(int width, int height) : width_(width), height_(height) {}

  std::size_t pixels() const override { return static_cast<std::size_t>(width_) * height_; }
  int components() const override { return 2; }
  void apply(std::span<const double> u, std::span<double> out) const override;
  void adjoint(std::span<const double> p, std::span<double> out) const override;
  double norm_sq_bound() const override { return 8.0; }

 private:
  int width_;
  int height_;
};

// sum over pixels of the Euclidean norm of (G u)(x).
double regularizer_value(const GradientOperator& op, std::span<const double> u);

// Isotropic total variation with LocalGradient.
double total_variation(const Image& img);

// argmin_u 1/2 ||u - f||^2 + lambda * regularizer_value(op, u), by fast
// gradient projection on the dual for a fixed number of iterations. `dual`,
// when given, warm-starts the solve and receives the final dual variable.
std::vector<double> rof_denoise(std::span<const double> f, double lambda,
                                const GradientOperator& op, int iterations,
                                std::vector<double>* dual = nullptr);

}  // namespace turbbench
