#include <complex>

#include "turbbench/deblur/deblur.hpp"
#include "turbbench/imgcore/errors.hpp"
#include "turbbench/imgcore/fft.hpp"

namespace turbbench {

Image wiener_deconvolve(const Image& img, const Kernel& k, double nsr) {
  if (!(nsr >= 0.0)) throw InvalidArgument("wiener_deconvolve: nsr must be >= 0");
  k.require_unit_gain("wiener_deconvolve");
  const Spectrum otf = kernel_otf(k, img.width(), img.height());
  Spectrum spec = forward_fft(img);
  for (std::size_t i = 1; i < spec.bins.size(); ++i) {
    const std::complex<double> h = otf.bins[i];
    const double denom = std::norm(h) + nsr;
    spec.bins[i] = denom > 0.0 ? std::conj(h) * spec.bins[i] / denom : 0.0;
  }
  return Image(img.width(), img.height(), inverse_fft(spec), img.dyn_range());
}

}  // namespace turbbench
