#include <algorithm>
#include <cmath>

#include "flow_internal.hpp"
#include "pyramid.hpp"

namespace turbbench::detail {

namespace {

// Bilinear sample with clamp-to-edge, fixed weights for a whole window.
struct Sampler {
  const double* data;
  int w, h;

  double at(int x, int y) const {
    return data[static_cast<std::size_t>(std::clamp(y, 0, h - 1)) * w + std::clamp(x, 0, w - 1)];
  }
};

}  // namespace

WarpField lk_refine(const Image& ref, const Image& frame, WarpField d, const FlowOptions& o) {
  const int w = ref.width();
  const int h = ref.height();
  const std::size_t n = ref.size();
  const int r = o.lk_window / 2;
  const double inv_area = 1.0 / (static_cast<double>(o.lk_window) * o.lk_window);

  Image gx, gy;
  central_gradient(ref, gx, gy);
  std::vector<double> ixx(n), ixy(n), iyy(n);
  for (std::size_t i = 0; i < n; ++i) {
    ixx[i] = gx[i] * gx[i];
    ixy[i] = gx[i] * gy[i];
    iyy[i] = gy[i] * gy[i];
  }
  double energy = 0.0;
  for (std::size_t i = 0; i < n; ++i) energy += 0.5 * (ixx[i] + iyy[i]);
  const double damping = kLkDamping * energy / static_cast<double>(n);
  const auto sxx = box_mean(ixx, w, h, o.lk_window);
  const auto sxy = box_mean(ixy, w, h, o.lk_window);
  const auto syy = box_mean(iyy, w, h, o.lk_window);
  const Sampler src{frame.pixels().data(), w, h};

  for (int it = 0; it < o.lk_iterations; ++it) {
    const WarpField prev = d;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const std::size_t i = static_cast<std::size_t>(y) * w + x;
        const double a = sxx[i], b = sxy[i], c = syy[i];
        const double half_tr = 0.5 * (a + c);
        const double disc = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
        if (half_tr + disc < kLkEigenGuard) continue;

        // Residual of the whole window under this pixel's displacement.
        const double fx0 = std::floor(prev.dx[i]);
        const double fy0 = std::floor(prev.dy[i]);
        const double ax = prev.dx[i] - fx0;
        const double ay = prev.dy[i] - fy0;
        const int ox = static_cast<int>(fx0);
        const int oy = static_cast<int>(fy0);
        double bx = 0.0, by = 0.0;
        for (int s = -r; s <= r; ++s) {
          const int yj = std::clamp(y + s, 0, h - 1);
          for (int t = -r; t <= r; ++t) {
            const int xj = std::clamp(x + t, 0, w - 1);
            const int sx = xj + ox;
            const int sy = yj + oy;
            const double v = (1.0 - ax) * (1.0 - ay) * src.at(sx, sy) + ax * (1.0 - ay) * src.at(sx + 1, sy) +
                             (1.0 - ax) * ay * src.at(sx, sy + 1) + ax * ay * src.at(sx + 1, sy + 1);
            const std::size_t j = static_cast<std::size_t>(yj) * w + xj;
            const double et = v - ref[j];
            bx += gx[j] * et;
            by += gy[j] * et;
          }
        }
        bx *= inv_area;
        by *= inv_area;

        // Damped normal equations (A + damping I) u = -(bx, by).
        const double ad = a + damping;
        const double cd = c + damping;
        const double det = ad * cd - b * b;
        double ux = -(cd * bx - b * by) / det;
        double uy = -(ad * by - b * bx) / det;
        const double step = std::hypot(ux, uy);
        if (step > kLkMaxStep) {
          ux *= kLkMaxStep / step;
          uy *= kLkMaxStep / step;
        }
        d.dx[i] += ux;
        d.dy[i] += uy;
      }
    }
  }
  return d;
}

}  // namespace turbbench::detail
