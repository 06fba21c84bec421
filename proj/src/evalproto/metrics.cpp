#include "turbbench/evalproto/metrics.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "turbbench/imgcore/errors.hpp"

namespace turbbench {

namespace {

void require_comparable(const Image& gt, const Image& rest, const char* what) {
  require_same_shape(gt, rest, what);
  if (gt.dyn_range() != rest.dyn_range()) {
    throw DimensionMismatch(std::string(what) + ": dynamic ranges differ");
  }
}

std::vector<double> gaussian_taps(int window, double sigma) {
  std::vector<double> taps(window);
  const int r = window / 2;
  double sum = 0.0;
  for (int i = 0; i < window; ++i) {
    const double d = i - r;
    taps[i] = std::exp(-d * d / (2.0 * sigma * sigma));
    sum += taps[i];
  }
  for (double& t : taps) t /= sum;
  return taps;
}

// Separable "valid" filtering of a w x h plane.
std::vector<double> filter_valid(const std::vector<double>& src, int w, int h,
                                 const std::vector<double>& taps) {
  const int n = static_cast<int>(taps.size());
  const int ow = w - n + 1;
  const int oh = h - n + 1;
  std::vector<double> rows(static_cast<std::size_t>(ow) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i) acc += taps[i] * src[static_cast<std::size_t>(y) * w + x + i];
      rows[static_cast<std::size_t>(y) * ow + x] = acc;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(ow) * oh);
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i) acc += taps[i] * rows[static_cast<std::size_t>(y + i) * ow + x];
      out[static_cast<std::size_t>(y) * ow + x] = acc;
    }
  }
  return out;
}

double ssim_formula(double mx, double my, double vx, double vy, double cxy, double c1, double c2) {
  return ((2.0 * mx * my + c1) * (2.0 * cxy + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
}

}  // namespace

void SsimOptions::validate() const {
  if (window < 3 || window % 2 == 0) throw InvalidArgument("ssim: window must be odd and >= 3");
  if (!(sigma > 0.0)) throw InvalidArgument("ssim: sigma must be > 0");
  if (!(k1 > 0.0) || !(k2 > 0.0)) throw InvalidArgument("ssim: k1 and k2 must be > 0");
}

std::string to_string(SsimMode m) { return m == SsimMode::Global ? "global" : "windowed"; }

SsimMode parse_ssim_mode(const std::string& text) {
  if (text == "windowed") return SsimMode::WindowedMean;
  if (text == "global") return SsimMode::Global;
  throw InvalidArgument("unknown ssim mode '" + text + "' (expected windowed or global)");
}

double psnr(const Image& gt, const Image& rest) {
  require_comparable(gt, rest, "psnr");
  double sse = 0.0;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const double d = gt[i] - rest[i];
    sse += d * d;
  }
  if (sse == 0.0) return std::numeric_limits<double>::infinity();
  const double mse = sse / static_cast<double>(gt.size());
  return 10.0 * std::log10(gt.dyn_range() * gt.dyn_range() / mse);
}

double ssim(const Image& gt, const Image& rest, const SsimOptions& opts) {
  opts.validate();
  require_comparable(gt, rest, "ssim");
  const double c1 = (opts.k1 * gt.dyn_range()) * (opts.k1 * gt.dyn_range());
  const double c2 = (opts.k2 * gt.dyn_range()) * (opts.k2 * gt.dyn_range());
  const std::size_t n = gt.size();

  if (opts.mode == SsimMode::Global) {
    const double mx = gt.mean();
    const double my = rest.mean();
    double vx = 0.0, vy = 0.0, cxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      vx += (gt[i] - mx) * (gt[i] - mx);
      vy += (rest[i] - my) * (rest[i] - my);
      cxy += (gt[i] - mx) * (rest[i] - my);
    }
    const double inv = 1.0 / static_cast<double>(n);
    return ssim_formula(mx, my, vx * inv, vy * inv, cxy * inv, c1, c2);
  }

  const int w = gt.width();
  const int h = gt.height();
  if (opts.window > w || opts.window > h) {
    throw InvalidArgument("ssim: window " + std::to_string(opts.window) + " larger than image " +
                          std::to_string(w) + "x" + std::to_string(h));
  }
  const auto taps = gaussian_taps(opts.window, opts.sigma);
  std::vector<double> x(gt.pixels().begin(), gt.pixels().end());
  std::vector<double> y(rest.pixels().begin(), rest.pixels().end());
  std::vector<double> xx(n), yy(n), xy(n);
  for (std::size_t i = 0; i < n; ++i) {
    xx[i] = x[i] * x[i];
    yy[i] = y[i] * y[i];
    xy[i] = x[i] * y[i];
  }
  const auto mx = filter_valid(x, w, h, taps);
  const auto my = filter_valid(y, w, h, taps);
  const auto sxx = filter_valid(xx, w, h, taps);
  const auto syy = filter_valid(yy, w, h, taps);
  const auto sxy = filter_valid(xy, w, h, taps);

  double total = 0.0;
  for (std::size_t i = 0; i < mx.size(); ++i) {
    const double vx = sxx[i] - mx[i] * mx[i];
    const double vy = syy[i] - my[i] * my[i];
    const double cxy = sxy[i] - mx[i] * my[i];
    total += ssim_formula(mx[i], my[i], vx, vy, cxy, c1, c2);
  }
  return total / static_cast<double>(mx.size());
}

}  // namespace turbbench
