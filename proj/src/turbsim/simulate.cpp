#include "turbbench/turbsim/simulate.hpp"

#include <cmath>
#include <random>

#include "turbbench/imgcore/convolve.hpp"
#include "turbbench/imgcore/errors.hpp"
#include "turbbench/imgcore/warp.hpp"
#include "turbbench/turbsim/seed.hpp"

namespace turbbench {

namespace {

// 1-D Gaussian (std `sigma`, radius 3 sigma) folded onto a circle of length n.
std::vector<double> circular_gaussian(double sigma, int n) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> taps(static_cast<std::size_t>(n), 0.0);
  double total = 0.0;
  for (int t = -radius; t <= radius; ++t) {
    const double g = std::exp(-0.5 * (t * t) / (sigma * sigma));
    taps[static_cast<std::size_t>(((t % n) + n) % n)] += g;
    total += g;
  }
  for (double& v : taps) v /= total;
  return taps;
}

double l2_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Separable circular filtering, keeping only the non-zero folded taps.
std::vector<double> smooth_circular(const std::vector<double>& in, int w, int h,
                                    const std::vector<double>& gx,
                                    const std::vector<double>& gy) {
  std::vector<std::pair<int, double>> tx, ty;
  for (int i = 0; i < w; ++i) {
    if (gx[i] != 0.0) tx.emplace_back(i, gx[i]);
  }
  for (int i = 0; i < h; ++i) {
    if (gy[i] != 0.0) ty.emplace_back(i, gy[i]);
  }
  std::vector<double> tmp(in.size(), 0.0), out(in.size(), 0.0);
  for (int y = 0; y < h; ++y) {
    const double* row = in.data() + static_cast<std::size_t>(y) * w;
    double* dst = tmp.data() + static_cast<std::size_t>(y) * w;
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (const auto& [off, g] : tx) {
        int xs = x - off;
        if (xs < 0) xs += w;
        acc += g * row[xs];
      }
      dst[x] = acc;
    }
  }
  for (int y = 0; y < h; ++y) {
    double* dst = out.data() + static_cast<std::size_t>(y) * w;
    for (const auto& [off, g] : ty) {
      int ys = y - off;
      if (ys < 0) ys += h;
      const double* src = tmp.data() + static_cast<std::size_t>(ys) * w;
      for (int x = 0; x < w; ++x) dst[x] += g * src[x];
    }
  }
  return out;
}

}  // namespace

WarpField sample_warp_field(const TurbulenceParams& p, int w, int h, std::uint64_t seed) {
  if (w < 8 || h < 8) throw InvalidArgument("sample_warp_field: field must be at least 8x8");
  validate(p);
  WarpField field(w, h);
  const double sigma_t = tilt_sigma_px(p);
  if (sigma_t == 0.0) return field;

  const double corr = tilt_correlation_px(p);
  const auto gx = circular_gaussian(corr, w);
  const auto gy = circular_gaussian(corr, h);
  const double scale = sigma_t / (l2_norm(gx) * l2_norm(gy));

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t n = static_cast<std::size_t>(w) * h;
  std::vector<double> noise_x(n), noise_y(n);
  for (double& v : noise_x) v = normal(rng);
  for (double& v : noise_y) v = normal(rng);

  field.dx = smooth_circular(noise_x, w, h, gx, gy);
  field.dy = smooth_circular(noise_y, w, h, gx, gy);
  for (std::size_t i = 0; i < n; ++i) {
    field.dx[i] *= scale;
    field.dy[i] *= scale;
  }
  return field;
}

Image degrade_blurred(const Image& blurred, const WarpField& field, double noise_sigma,
                      std::uint64_t seed) {
  if (!(noise_sigma >= 0.0)) throw InvalidArgument("degrade_frame: noise_sigma must be >= 0");
  Image out = warp_image(blurred, field, BorderMode::Clamp);
  if (noise_sigma > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, noise_sigma);
    for (double& v : out.pixels()) v += normal(rng);
  }
  return out;
}

Image degrade_frame(const Image& u, const Kernel& k, const WarpField& field, double noise_sigma,
                    std::uint64_t seed) {
  return degrade_blurred(convolve_fft(u, k), field, noise_sigma, seed);
}

Sequence simulate_sequence(const Image& u, const TurbulenceParams& p, std::uint64_t seed,
                           int kernel_size) {
  validate(p);
  return simulate_sequence(u, p, long_exposure_kernel(p, kernel_size), seed);
}

Sequence simulate_sequence(const Image& u, const TurbulenceParams& p, const Kernel& kernel,
                           std::uint64_t seed) {
  validate(p);
  require_min_size(u, 8, "simulate_sequence");
  const Image blurred = convolve_fft(u, kernel);

  Sequence seq;
  seq.params = p;
  seq.seed = seed;
  seq.frames.reserve(static_cast<std::size_t>(p.num_frames));
  for (int i = 0; i < p.num_frames; ++i) {
    const WarpField field =
        sample_warp_field(p, u.width(), u.height(), frame_seed(seed, i, FrameStream::Warp));
    seq.frames.push_back(
        degrade_blurred(blurred, field, p.noise_sigma, frame_seed(seed, i, FrameStream::Noise)));
  }
  return seq;
}

}  // namespace turbbench
