#include "oracles.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace turbbench::testing {

double naive_psnr(const Image& gt, const Image& rest) {
  long double sse = 0.0L;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const long double d = static_cast<long double>(gt[i]) - rest[i];
    sse += d * d;
  }
  const long double mse = sse / gt.size();
  const long double peak = gt.dyn_range();
  return static_cast<double>(10.0L * std::log10(peak * peak / mse));
}

double naive_ssim(const Image& x, const Image& y, int win, double sigma, double k1, double k2) {
  std::vector<double> w(static_cast<std::size_t>(win) * win);
  double total = 0.0;
  const int r = win / 2;
  for (int j = 0; j < win; ++j) {
    for (int i = 0; i < win; ++i) {
      const double v = std::exp(-((i - r) * (i - r) + (j - r) * (j - r)) / (2.0 * sigma * sigma));
      w[j * win + i] = v;
      total += v;
    }
  }
  for (double& v : w) v /= total;
  const double c1 = (k1 * x.dyn_range()) * (k1 * x.dyn_range());
  const double c2 = (k2 * x.dyn_range()) * (k2 * x.dyn_range());
  double sum = 0.0;
  int count = 0;
  for (int oy = 0; oy + win <= x.height(); ++oy) {
    for (int ox = 0; ox + win <= x.width(); ++ox) {
      double mx = 0, my = 0;
      for (int j = 0; j < win; ++j) {
        for (int i = 0; i < win; ++i) {
          mx += w[j * win + i] * x(ox + i, oy + j);
          my += w[j * win + i] * y(ox + i, oy + j);
        }
      }
      double vx = 0, vy = 0, cxy = 0;
      for (int j = 0; j < win; ++j) {
        for (int i = 0; i < win; ++i) {
          const double a = x(ox + i, oy + j) - mx;
          const double b = y(ox + i, oy + j) - my;
          vx += w[j * win + i] * a * a;
          vy += w[j * win + i] * b * b;
          cxy += w[j * win + i] * a * b;
        }
      }
      sum += ((2 * mx * my + c1) * (2 * cxy + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
      ++count;
    }
  }
  return sum / count;
}

Image blob_texture(int w, int h, std::uint64_t seed, double shift_x, double shift_y) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> px(-10.0, w + 10.0), py(-10.0, h + 10.0);
  std::uniform_real_distribution<double> amp(-60.0, 60.0), rad(2.5, 5.0);
  struct Blob {
    double x, y, a, r;
  };
  std::vector<Blob> blobs(static_cast<std::size_t>(w * h / 40));
  for (auto& b : blobs) b = {px(rng), py(rng), amp(rng), rad(rng)};
  Image img(w, h, 255.0, 128.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double v = 128.0;
      for (const auto& b : blobs) {
        const double dx = x - shift_x - b.x;
        const double dy = y - shift_y - b.y;
        v += b.a * std::exp(-(dx * dx + dy * dy) / (2.0 * b.r * b.r));
      }
      img(x, y) = v;
    }
  }
  return img;
}

}  // namespace turbbench::testing
