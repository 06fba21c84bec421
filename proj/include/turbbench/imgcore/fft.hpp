#pragma once

#include <complex>
#include <span>
#include <vector>

namespace turbbench {

class Image;
class Kernel;

// Half spectrum of a real width x height field (height rows of width/2+1 bins).
struct Spectrum {
  int width = 0;
  int height = 0;
  std::vector<std::complex<double>> bins;

  int half_width() const { return width / 2 + 1; }
  std::complex<double>& at(int kx, int ky) { return bins[ky * half_width() + kx]; }
  std::complex<double> at(int kx, int ky) const { return bins[ky * half_width() + kx]; }
};

Spectrum forward_fft(std::span<const double> data, int width, int height);
Spectrum forward_fft(const Image& img);

// Normalised inverse: inverse_fft(forward_fft(x)) == x up to rounding.
std::vector<double> inverse_fft(const Spectrum& spectrum);

// Transfer function of `k` on a width x height periodic grid, with the kernel
// centre placed at the origin.
Spectrum kernel_otf(const Kernel& k, int width, int height);

}  // namespace turbbench
