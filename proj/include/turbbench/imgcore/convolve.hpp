#pragma once

#include "turbbench/imgcore/fft.hpp"
#include "turbbench/imgcore/image.hpp"
#include "turbbench/imgcore/kernel.hpp"

namespace turbbench {

// Circular convolution computed in the frequency domain.
Image convolve_fft(const Image& src, const Kernel& kernel);

// Pointwise multiply of the image spectrum by a precomputed transfer
// function; `otf` must match the image shape.
Image apply_otf(const Image& src, const Spectrum& otf, bool conjugate = false);

}  // namespace turbbench
