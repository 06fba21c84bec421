#include <algorithm>

#include "turbbench/deblur/deblur.hpp"
#include "turbbench/imgcore/convolve.hpp"
#include "turbbench/imgcore/errors.hpp"

namespace turbbench {

namespace {
constexpr double kDivisionGuard = 1e-12;
}

Image lucy_richardson(const Image& img, const Kernel& k, int iterations) {
  if (iterations < 1) throw InvalidArgument("lucy_richardson: iterations must be >= 1");
  k.require_unit_gain("lucy_richardson");
  const double lowest = *std::min_element(img.pixels().begin(), img.pixels().end());
  const double shift = lowest < 0.0 ? -lowest : 0.0;

  Image observed = img;
  for (double& v : observed.pixels()) v += shift;
  const Spectrum otf = kernel_otf(k, img.width(), img.height());

  Image estimate = observed;
  Image ratio(img.width(), img.height(), img.dyn_range());
  for (int it = 0; it < iterations; ++it) {
    const Image predicted = apply_otf(estimate, otf);
    for (std::size_t i = 0; i < ratio.size(); ++i) {
      ratio[i] = observed[i] / std::max(predicted[i], kDivisionGuard);
    }
    const Image correction = apply_otf(ratio, otf, /*conjugate=*/true);
    for (std::size_t i = 0; i < estimate.size(); ++i) estimate[i] *= correction[i];
  }
  for (double& v : estimate.pixels()) v -= shift;
  return estimate;
}

}  // namespace turbbench
