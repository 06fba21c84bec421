#include "pyramid.hpp"

#include <algorithm>

#include "turbbench/imgcore/warp.hpp"

namespace turbbench::detail {

Image downsample(const Image& img) {
  static constexpr double kTaps[5] = {1.0 / 16, 4.0 / 16, 6.0 / 16, 4.0 / 16, 1.0 / 16};
  const int w = img.width();
  const int h = img.height();
  Image tmp(w, h, img.dyn_range());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int t = -2; t <= 2; ++t) acc += kTaps[t + 2] * img(std::clamp(x + t, 0, w - 1), y);
      tmp(x, y) = acc;
    }
  }
  const int w2 = (w + 1) / 2;
  const int h2 = (h + 1) / 2;
  Image out(w2, h2, img.dyn_range());
  for (int y = 0; y < h2; ++y) {
    for (int x = 0; x < w2; ++x) {
      double acc = 0.0;
      for (int t = -2; t <= 2; ++t) acc += kTaps[t + 2] * tmp(2 * x, std::clamp(2 * y + t, 0, h - 1));
      out(x, y) = acc;
    }
  }
  return out;
}

std::vector<Image> build_pyramid(const Image& base, int levels) {
  std::vector<Image> pyr{base};
  while (static_cast<int>(pyr.size()) < levels) {
    const Image& last = pyr.back();
    if ((last.width() + 1) / 2 < 8 || (last.height() + 1) / 2 < 8) break;
    pyr.push_back(downsample(last));
  }
  return pyr;
}

WarpField upsample_flow(const WarpField& coarse, int w, int h) {
  WarpField fine(w, h);
  const double sx = static_cast<double>(coarse.width) / w;
  const double sy = static_cast<double>(coarse.height) / h;
  const Image cx(coarse.width, coarse.height, coarse.dx, 1.0);
  const Image cy(coarse.width, coarse.height, coarse.dy, 1.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double px = (x + 0.5) * sx - 0.5;
      const double py = (y + 0.5) * sy - 0.5;
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      fine.dx[i] = sample_bilinear(cx, px, py) / sx;
      fine.dy[i] = sample_bilinear(cy, px, py) / sy;
    }
  }
  return fine;
}

void central_gradient(const Image& img, Image& gx, Image& gy) {
  const int w = img.width();
  const int h = img.height();
  gx = Image(w, h, img.dyn_range());
  gy = Image(w, h, img.dyn_range());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int xm = std::max(x - 1, 0), xp = std::min(x + 1, w - 1);
      const int ym = std::max(y - 1, 0), yp = std::min(y + 1, h - 1);
      gx(x, y) = xp > xm ? (img(xp, y) - img(xm, y)) / (xp - xm) : 0.0;
      gy(x, y) = yp > ym ? (img(x, yp) - img(x, ym)) / (yp - ym) : 0.0;
    }
  }
}

std::vector<double> box_mean(const std::vector<double>& v, int w, int h, int window) {
  const int r = window / 2;
  const double inv = 1.0 / window;
  std::vector<double> tmp(v.size()), out(v.size());
  for (int y = 0; y < h; ++y) {
    const double* row = v.data() + static_cast<std::size_t>(y) * w;
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int t = -r; t <= r; ++t) acc += row[std::clamp(x + t, 0, w - 1)];
      tmp[static_cast<std::size_t>(y) * w + x] = acc * inv;
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int t = -r; t <= r; ++t) {
        acc += tmp[static_cast<std::size_t>(std::clamp(y + t, 0, h - 1)) * w + x];
      }
      out[static_cast<std::size_t>(y) * w + x] = acc * inv;
    }
  }
  return out;
}

}  // namespace turbbench::detail
