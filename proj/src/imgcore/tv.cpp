#include "turbbench/imgcore/tv.hpp"

#include <cmath>

#include "turbbench/imgcore/errors.hpp"

namespace turbbench {

void LocalGradient::apply(std::span<const double> u, std::span<double> out) const {
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * width_ + x;
      out[2 * i] = x + 1 < width_ ? u[i + 1] - u[i] : 0.0;
      out[2 * i + 1] = y + 1 < height_ ? u[i + width_] - u[i] : 0.0;
    }
  }
}

void LocalGradient::adjoint(std::span<const double> p, std::span<double> out) const {
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * width_ + x;
      double v = 0.0;
      if (x + 1 < width_) v -= p[2 * i];
      if (x > 0) v += p[2 * (i - 1)];
      if (y + 1 < height_) v -= p[2 * i + 1];
      if (y > 0) v += p[2 * (i - width_) + 1];
      out[i] = v;
    }
  }
}

double regularizer_value(const GradientOperator& op, std::span<const double> u) {
  const int m = op.components();
  std::vector<double> g(op.pixels() * m);
  op.apply(u, g);
  double total = 0.0;
  for (std::size_t i = 0; i < op.pixels(); ++i) {
    double s = 0.0;
    for (int c = 0; c < m; ++c) s += g[i * m + c] * g[i * m + c];
    total += std::sqrt(s);
  }
  return total;
}

double total_variation(const Image& img) {
  return regularizer_value(LocalGradient(img.width(), img.height()), img.pixels());
}

std::vector<double> rof_denoise(std::span<const double> f, double lambda,
                                const GradientOperator& op, int iterations,
                                std::vector<double>* dual) {
  const std::size_t n = op.pixels();
  const int m = op.components();
  if (f.size() != n) throw DimensionMismatch("rof_denoise: image/operator size mismatch");
  if (lambda < 0.0) throw InvalidArgument("rof_denoise: lambda must be >= 0");
  std::vector<double> u(f.begin(), f.end());
  if (lambda == 0.0 || iterations <= 0) return u;

  std::vector<double> p(n * m, 0.0);
  if (dual != nullptr && dual->size() == p.size()) p = *dual;
  std::vector<double> r = p, p_next(n * m), g(n * m), gt(n);
  const double step = 1.0 / (lambda * op.norm_sq_bound());
  double t = 1.0;

  auto primal = [&](const std::vector<double>& q) {
    op.adjoint(q, gt);
    for (std::size_t i = 0; i < n; ++i) u[i] = f[i] - lambda * gt[i];
  };

  for (int k = 0; k < iterations; ++k) {
    primal(r);
    op.apply(u, g);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (int c = 0; c < m; ++c) {
        const double v = r[i * m + c] + step * g[i * m + c];
        p_next[i * m + c] = v;
        s += v * v;
      }
      if (s > 1.0) {
        const double inv = 1.0 / std::sqrt(s);
        for (int c = 0; c < m; ++c) p_next[i * m + c] *= inv;
      }
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double beta = (t - 1.0) / t_next;
    for (std::size_t j = 0; j < p.size(); ++j) {
      r[j] = p_next[j] + beta * (p_next[j] - p[j]);
    }
    p.swap(p_next);
    t = t_next;
  }
  primal(p);
  if (dual != nullptr) *dual = std::move(p);
  return u;
}

}  // namespace turbbench
