#include <cmath>

#include "turbbench/deblur/deblur.hpp"
#include "turbbench/imgcore/errors.hpp"

namespace turbbench {

std::string to_string(DeblurMethod m) {
  switch (m) {
    case DeblurMethod::Wiener:
      return "wiener";
    case DeblurMethod::LucyRichardson:
      return "lr";
    case DeblurMethod::TVDeconv:
    default:
      return "tv";
  }
}

void DeblurSpec::validate() const {
  if (!(nsr >= 0.0) || !std::isfinite(nsr)) throw InvalidArgument("deblur: nsr must be >= 0");
  if (lr_iterations < 1) throw InvalidArgument("deblur: lr_iterations must be >= 1");
  if (tv_iterations < 1) throw InvalidArgument("deblur: tv_iterations must be >= 1");
  if (!(tv_lambda > 0.0)) throw InvalidArgument("deblur: tv_lambda must be > 0");
  if (kernel_size < 3 || kernel_size % 2 == 0) {
    throw InvalidArgument("deblur: kernel_size must be odd and >= 3");
  }
  if (const auto* sb = std::get_if<SemiBlind>(&kernel)) {
    if (sb->r0_grid.empty()) throw InvalidArgument("deblur: r0_grid must not be empty");
    for (double r0 : sb->r0_grid) {
      if (!(r0 > 0.0) || !std::isfinite(r0)) {
        throw InvalidArgument("deblur: r0_grid values must be > 0");
      }
    }
  }
}

std::string DeblurSpec::label() const {
  const std::string base = to_string(method);
  return std::holds_alternative<SemiBlind>(kernel) ? "semiblind-" + base : base;
}

Image deconvolve_with(const Image& img, const Kernel& k, const DeblurSpec& spec) {
  switch (spec.method) {
    case DeblurMethod::Wiener:
      return wiener_deconvolve(img, k, spec.nsr);
    case DeblurMethod::LucyRichardson:
      return lucy_richardson(img, k, spec.lr_iterations);
    case DeblurMethod::TVDeconv:
    default:
      return tv_deconvolve(img, k, spec.tv_lambda, spec.tv_iterations);
  }
}

Image deblur(const Image& img, const TurbulenceParams& p, const DeblurSpec& spec,
             std::optional<double>* chosen_r0) {
  spec.validate();
  if (const auto* k = std::get_if<Kernel>(&spec.kernel)) return deconvolve_with(img, *k, spec);
  if (std::holds_alternative<SemiBlind>(spec.kernel)) {
    SemiBlindResult result = semiblind_deconvolve(img, p, spec);
    if (chosen_r0 != nullptr) *chosen_r0 = result.r0;
    return std::move(result.image);
  }
  return deconvolve_with(img, long_exposure_kernel(p, spec.kernel_size), spec);
}

}  // namespace turbbench
