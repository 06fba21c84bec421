#include "turbbench/imgcore/convolve.hpp"

#include <complex>

#include "turbbench/imgcore/errors.hpp"

namespace turbbench {

Image apply_otf(const Image& src, const Spectrum& otf, bool conjugate) {
  if (otf.width != src.width() || otf.height != src.height()) {
    throw DimensionMismatch("apply_otf: transfer function does not match image");
  }
  Spectrum spec = forward_fft(src);
  for (std::size_t i = 0; i < spec.bins.size(); ++i) {
    spec.bins[i] *= conjugate ? std::conj(otf.bins[i]) : otf.bins[i];
  }
  return Image(src.width(), src.height(), inverse_fft(spec), src.dyn_range());
}

Image convolve_fft(const Image& src, const Kernel& kernel) {
  if (!kernel.all_finite()) throw InvalidArgument("convolve_fft: kernel has non-finite taps");
  if (src.width() < kernel.size() || src.height() < kernel.size()) {
    throw InvalidArgument("convolve_fft: image smaller than kernel support");
  }
  if (kernel.size() == 1) {
    Image out = src;
    if (kernel(0, 0) != 1.0) {
      for (double& v : out.pixels()) v *= kernel(0, 0);
    }
    return out;
  }
  return apply_otf(src, kernel_otf(kernel, src.width(), src.height()));
}

}  // namespace turbbench
