#pragma once

#include <optional>

#include "turbbench/imgcore/kernel.hpp"
#include "turbbench/imgcore/sequence.hpp"

namespace turbbench {

inline constexpr int kDefaultKernelSize = 31;
inline constexpr double kMinKernelEnergy = 0.999;
inline constexpr double kMaxTiltSigmaPx = 8.0;

// Plane-wave Fried parameter r0 = (0.423 k^2 Cn2 L)^(-3/5), k = 2 pi / lambda.
// Returns nullopt when cn2 == 0 (no turbulence). Throws on negative inputs.
std::optional<double> fried_parameter(const TurbulenceParams& p);

struct KernelReport {
  Kernel kernel;
  // Fraction of the untruncated PSF flux that falls inside the support.
  double energy_fraction = 1.0;
};

// Long-exposure PSF: inverse transform of diffraction OTF times
// exp(-3.44 (lambda d nu / r0)^(5/3)), cropped to `size`, clipped to be
// non-negative and renormalised. r0 == nullopt gives the diffraction limit.
KernelReport long_exposure_kernel_for_r0(const TurbulenceParams& p, std::optional<double> r0,
                                         int size = kDefaultKernelSize);

// As above with r0 from fried_parameter(p). Logs a warning when the support
// holds less than 99.9% of the PSF flux.
Kernel long_exposure_kernel(const TurbulenceParams& p, int size = kDefaultKernelSize);

// Per-axis tilt standard deviation in pixels, capped at kMaxTiltSigmaPx.
double tilt_sigma_px(const TurbulenceParams& p);

// Correlation length of the warp field in pixels (at least 4).
int tilt_correlation_px(const TurbulenceParams& p);

}  // namespace turbbench
