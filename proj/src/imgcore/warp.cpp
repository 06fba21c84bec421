#include "turbbench/imgcore/warp.hpp"

#include <algorithm>
#include <cmath>

#include "turbbench/imgcore/errors.hpp"

namespace turbbench {

namespace {

int reflect(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

// Value of src at integer coordinates, resolving out-of-range per mode.
double fetch(const Image& src, int x, int y, BorderMode border) {
  const int w = src.width();
  const int h = src.height();
  if (x >= 0 && x < w && y >= 0 && y < h) return src(x, y);
  switch (border) {
    case BorderMode::Zero:
      return 0.0;
    case BorderMode::Reflect:
      return src(reflect(x, w), reflect(y, h));
    case BorderMode::Clamp:
    default:
      return src(std::clamp(x, 0, w - 1), std::clamp(y, 0, h - 1));
  }
}

void keys_weights(double t, double w[4]) {
  constexpr double a = -0.5;
  const double t2 = t * t;
  const double t3 = t2 * t;
  w[0] = a * (t3 - 2.0 * t2 + t);
  w[1] = (a + 2.0) * t3 - (a + 3.0) * t2 + 1.0;
  w[2] = -(a + 2.0) * t3 + (2.0 * a + 3.0) * t2 - a * t;
  w[3] = -a * (t3 - t2);
}

}  // namespace

double sample_cubic(const Image& src, double x, double y, BorderMode border) {
  const double fx0 = std::floor(x);
  const double fy0 = std::floor(y);
  double wx[4];
  double wy[4];
  keys_weights(x - fx0, wx);
  keys_weights(y - fy0, wy);
  const int x0 = static_cast<int>(fx0) - 1;
  const int y0 = static_cast<int>(fy0) - 1;
  const bool inside = x0 >= 0 && y0 >= 0 && x0 + 3 < src.width() && y0 + 3 < src.height();
  double sum = 0.0;
  for (int j = 0; j < 4; ++j) {
    double row = 0.0;
    for (int i = 0; i < 4; ++i) {
      row += wx[i] * (inside ? src(x0 + i, y0 + j) : fetch(src, x0 + i, y0 + j, border));
    }
    sum += wy[j] * row;
  }
  return sum;
}

double sample_bilinear(const Image& src, double x, double y, BorderMode border) {
  const double fx0 = std::floor(x);
  const double fy0 = std::floor(y);
  const double ax = x - fx0;
  const double ay = y - fy0;
  const int x0 = static_cast<int>(fx0);
  const int y0 = static_cast<int>(fy0);
  const double v00 = fetch(src, x0, y0, border);
  const double v10 = fetch(src, x0 + 1, y0, border);
  const double v01 = fetch(src, x0, y0 + 1, border);
  const double v11 = fetch(src, x0 + 1, y0 + 1, border);
  return (1.0 - ax) * (1.0 - ay) * v00 + ax * (1.0 - ay) * v10 + (1.0 - ax) * ay * v01 +
         ax * ay * v11;
}

Image warp_image(const Image& src, const WarpField& field, BorderMode border,
                 Interpolation interp) {
  if (field.width != src.width() || field.height != src.height() ||
      field.dx.size() != src.size() || field.dy.size() != src.size()) {
    throw DimensionMismatch("warp_image: field does not match image dimensions");
  }
  if (!field.all_finite()) throw InvalidArgument("warp_image: non-finite displacement");
  Image out(src.width(), src.height(), src.dyn_range());
  const int w = src.width();
  for (int y = 0; y < src.height(); ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      out[i] = interp == Interpolation::Cubic
                   ? sample_cubic(src, x + field.dx[i], y + field.dy[i], border)
                   : sample_bilinear(src, x + field.dx[i], y + field.dy[i], border);
    }
  }
  return out;
}

}  // namespace turbbench
