#include "turbbench/turbsim/optics.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "turbbench/imgcore/errors.hpp"
#include "turbbench/imgcore/fft.hpp"

namespace turbbench {

namespace {

// Circular-aperture diffraction MTF at normalised frequency x = nu / cutoff.
double diffraction_otf(double x) {
  if (x >= 1.0) return 0.0;
  return (2.0 / std::numbers::pi) * (std::acos(x) - x * std::sqrt(1.0 - x * x));
}

int transform_size(int kernel_size) {
  int n = 128;
  while (n < 4 * kernel_size) n *= 2;
  return n;
}

}  // namespace

std::optional<double> fried_parameter(const TurbulenceParams& p) {
  if (p.cn2 < 0.0 || p.path_length_m < 0.0 || p.wavelength_m <= 0.0) {
    throw InvalidArgument("fried_parameter: negative or zero physical input");
  }
  if (p.cn2 == 0.0 || p.path_length_m == 0.0) return std::nullopt;
  const double k = 2.0 * std::numbers::pi / p.wavelength_m;
  return std::pow(0.423 * k * k * p.cn2 * p.path_length_m, -3.0 / 5.0);
}

KernelReport long_exposure_kernel_for_r0(const TurbulenceParams& p, std::optional<double> r0,
                                         int size) {
  if (size < 3 || size % 2 == 0) {
    throw InvalidArgument("long_exposure_kernel: size must be odd and >= 3");
  }
  if (r0 && !(*r0 > 0.0)) throw InvalidArgument("long_exposure_kernel: r0 must be positive");
  validate(p);

  const int n = transform_size(size);
  const double cutoff = p.aperture_m / (p.wavelength_m * p.focal_m);  // cycles/m on the sensor
  Spectrum otf{n, n, {}};
  otf.bins.assign(static_cast<std::size_t>(n) * otf.half_width(), {0.0, 0.0});
  for (int ky = 0; ky < n; ++ky) {
    const int fy = ky <= n / 2 ? ky : ky - n;
    for (int kx = 0; kx < otf.half_width(); ++kx) {
      const double cycles_per_px = std::hypot(kx, fy) / n;
      const double nu = cycles_per_px / p.pixel_pitch_m;
      double value = diffraction_otf(nu / cutoff);
      if (r0) {
        value *= std::exp(-3.44 * std::pow(p.wavelength_m * p.focal_m * nu / *r0, 5.0 / 3.0));
      }
      otf.at(kx, ky) = value;
    }
  }
  const std::vector<double> psf = inverse_fft(otf);

  double total = 0.0;
  for (double v : psf) total += std::max(v, 0.0);
  const int r = size / 2;
  std::vector<double> taps(static_cast<std::size_t>(size) * size);
  double kept = 0.0;
  for (int j = 0; j < size; ++j) {
    const int y = ((j - r) % n + n) % n;
    for (int i = 0; i < size; ++i) {
      const int x = ((i - r) % n + n) % n;
      const double v = std::max(psf[static_cast<std::size_t>(y) * n + x], 0.0);
      taps[static_cast<std::size_t>(j) * size + i] = v;
      kept += v;
    }
  }
  for (double& t : taps) t /= kept;
  return {Kernel(size, std::move(taps)), kept / total};
}

Kernel long_exposure_kernel(const TurbulenceParams& p, int size) {
  KernelReport report = long_exposure_kernel_for_r0(p, fried_parameter(p), size);
  if (report.energy_fraction < kMinKernelEnergy) {
    spdlog::warn("{}x{} kernel holds only {:.4f} of the PSF flux (L={} m, cn2={})", size, size,
                 report.energy_fraction, p.path_length_m, p.cn2);
  }
  return std::move(report.kernel);
}

double tilt_sigma_px(const TurbulenceParams& p) {
  const auto r0 = fried_parameter(p);
  if (!r0) return 0.0;
  const double angle = 0.36 * (p.wavelength_m / *r0) * std::pow(p.aperture_m / *r0, 1.0 / 6.0);
  return std::clamp(angle * p.focal_m / p.pixel_pitch_m, 0.0, kMaxTiltSigmaPx);
}

int tilt_correlation_px(const TurbulenceParams& p) {
  const double l = p.focal_m * p.wavelength_m / (p.aperture_m * p.pixel_pitch_m);
  return std::max(4, static_cast<int>(std::lround(l)));
}

}  // namespace turbbench
