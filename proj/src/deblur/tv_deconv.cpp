#include <algorithm>
#include <cmath>
#include <complex>

#include "turbbench/deblur/deblur.hpp"
#include "turbbench/imgcore/convolve.hpp"
#include "turbbench/imgcore/errors.hpp"
#include "turbbench/imgcore/tv.hpp"

namespace turbbench {

namespace {

constexpr int kProxIterations = 20;

double objective_with_otf(const Image& u, const Image& img, const Spectrum& otf, double lambda) {
  const Image ku = apply_otf(u, otf);
  double data = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) data += (ku[i] - img[i]) * (ku[i] - img[i]);
  return 0.5 * data + lambda * total_variation(u);
}

}  // namespace

double tv_deconv_objective(const Image& u, const Image& img, const Kernel& k, double lambda) {
  require_same_shape(u, img, "tv_deconv_objective");
  return objective_with_otf(u, img, kernel_otf(k, img.width(), img.height()), lambda);
}

Image tv_deconvolve(const Image& img, const Kernel& k, double lambda, int iterations,
                    TvDeconvTrace* trace) {
  if (!(lambda > 0.0)) throw InvalidArgument("tv_deconvolve: lambda must be > 0");
  if (iterations < 1) throw InvalidArgument("tv_deconvolve: iterations must be >= 1");
  k.require_unit_gain("tv_deconvolve");

  const Spectrum otf = kernel_otf(k, img.width(), img.height());
  double lipschitz = 0.0;
  for (const auto& h : otf.bins) lipschitz = std::max(lipschitz, std::norm(h));
  lipschitz = std::max(lipschitz, 1e-12);
  const LocalGradient grad(img.width(), img.height());

  Image x = img;
  Image y = img;
  double fx = objective_with_otf(x, img, otf, lambda);
  double t = 1.0;
  std::vector<double> dual;
  Image step(img.width(), img.height(), img.dyn_range());

  for (int it = 0; it < iterations; ++it) {
    Image residual = apply_otf(y, otf);
    for (std::size_t i = 0; i < residual.size(); ++i) residual[i] -= img[i];
    const Image gradient = apply_otf(residual, otf, /*conjugate=*/true);
    for (std::size_t i = 0; i < step.size(); ++i) step[i] = y[i] - gradient[i] / lipschitz;

    const Image z(img.width(), img.height(),
                  rof_denoise(step.pixels(), lambda / lipschitz, grad, kProxIterations, &dual),
                  img.dyn_range());
    const double fz = objective_with_otf(z, img, otf, lambda);
    const bool accept = fz <= fx;
    const Image& x_next = accept ? z : x;

    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    for (std::size_t i = 0; i < y.size(); ++i) {
      y[i] = x_next[i] + (t / t_next) * (z[i] - x_next[i]) + ((t - 1.0) / t_next) * (x_next[i] - x[i]);
    }
    if (accept) {
      x = z;
      fx = fz;
    }
    t = t_next;
    if (trace != nullptr) trace->objective.push_back(fx);
  }
  return x;
}

}  // namespace turbbench
