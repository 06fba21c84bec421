#include <algorithm>
#include <cmath>
#include <numeric>

#include "turbbench/deblur/deblur.hpp"
#include "turbbench/imgcore/errors.hpp"

namespace turbbench {

std::vector<double> default_r0_grid() {
  return {0.002, 0.003, 0.004, 0.006, 0.008, 0.012, 0.016, 0.024, 0.032,
          0.048, 0.064, 0.096, 0.128, 0.192, 0.256, 0.384, 0.512};
}

double sharpness_score(const Image& img) {
  const int w = img.width();
  const int h = img.height();
  std::size_t outside = 0;
  for (double v : img.pixels()) {
    if (v < 0.0 || v > img.dyn_range()) ++outside;
  }
  const double penalty = kRingingPenalty * static_cast<double>(outside) / static_cast<double>(img.size());

  double l1 = 0.0, l2 = 0.0;
  std::size_t n = 0;
  for (int y = 0; y + 1 < h; ++y) {
    for (int x = 0; x + 1 < w; ++x) {
      const double g = std::hypot(img(x + 1, y) - img(x, y), img(x, y + 1) - img(x, y));
      l1 += g;
      l2 += g * g;
      ++n;
    }
  }
  if (l2 <= 1e-18 * img.dyn_range() * img.dyn_range() * static_cast<double>(n)) return -penalty;
  return -l1 / (std::sqrt(static_cast<double>(n)) * std::sqrt(l2)) - penalty;
}

SemiBlindResult semiblind_deconvolve(const Image& img, const TurbulenceParams& p,
                                     const DeblurSpec& spec) {
  const auto* sb = std::get_if<SemiBlind>(&spec.kernel);
  if (sb == nullptr || sb->r0_grid.empty()) {
    throw InvalidArgument("semiblind_deconvolve: empty r0 grid");
  }
  spec.validate();

  const auto& grid = sb->r0_grid;
  std::vector<std::size_t> order(grid.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return grid[a] < grid[b]; });

  SemiBlindResult best;
  best.scores.assign(grid.size(), 0.0);
  bool have_best = false;
  double best_score = 0.0;
  for (std::size_t idx : order) {
    const Kernel k = long_exposure_kernel_for_r0(p, grid[idx], spec.kernel_size).kernel;
    Image candidate = deconvolve_with(img, k, spec);
    const double score = sharpness_score(candidate);
    best.scores[idx] = score;
    if (!have_best || score > best_score) {
      have_best = true;
      best_score = score;
      best.image = std::move(candidate);
      best.r0 = grid[idx];
    }
  }
  return best;
}

}  // namespace turbbench
