#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "turbbench/imgcore/image.hpp"
#include "turbbench/imgcore/kernel.hpp"
#include "turbbench/imgcore/sequence.hpp"
#include "turbbench/turbsim/optics.hpp"

namespace turbbench {

enum class DeblurMethod { Wiener, LucyRichardson, TVDeconv };

// Kernel comes from the sequence parameters (long-exposure model).
struct ModelKernel {};
struct SemiBlind {
  std::vector<double> r0_grid;
};

struct DeblurSpec {
  DeblurMethod method = DeblurMethod::Wiener;
  double nsr = 1e-3;
  int lr_iterations = 30;
  double tv_lambda = 0.01;
  int tv_iterations = 200;
  std::variant<ModelKernel, Kernel, SemiBlind> kernel = ModelKernel{};
  int kernel_size = kDefaultKernelSize;

  void validate() const;
  // wiener, lr or tv, prefixed with "semiblind-" for a semi-blind search.
  std::string label() const;
};

std::string to_string(DeblurMethod m);

// conj(K) F / (|K|^2 + nsr) on every non-DC frequency; the DC term passes
// through unchanged (K(0) = 1), so a constant offset is preserved exactly.
Image wiener_deconvolve(const Image& img, const Kernel& k, double nsr);

// Multiplicative Richardson-Lucy updates from u0 = img with circular
// boundaries. Negative inputs are shifted up before and back after.
Image lucy_richardson(const Image& img, const Kernel& k, int iterations);

// 1/2 ||k * u - img||^2 + lambda TV(u).
double tv_deconv_objective(const Image& u, const Image& img, const Kernel& k, double lambda);

struct TvDeconvTrace {
  std::vector<double> objective;  // after each iteration
};

// Monotone accelerated proximal gradient with a warm-started inner TV prox;
// the objective never increases between iterations.
Image tv_deconvolve(const Image& img, const Kernel& k, double lambda, int iterations,
                    TvDeconvTrace* trace = nullptr);

// No-reference quality score, higher is better: minus the normalised gradient
// sparsity ||grad u||_1 / (sqrt(n) ||grad u||_2), minus 0.1 times the fraction
// of pixels outside [0, dyn_range]. Blur and ringing both raise the sparsity
// ratio. A constant image scores minus the penalty alone.
double sharpness_score(const Image& img);
inline constexpr double kRingingPenalty = 0.1;

// Geometric r0 grid (metres) from 2 mm to 0.512 m, about sqrt(2) apart.
std::vector<double> default_r0_grid();

struct SemiBlindResult {
  Image image;
  double r0 = 0.0;
  std::vector<double> scores;  // aligned with the r0 grid as given
};

// Runs the chosen deconvolver once per r0 in the grid with the long-exposure
// kernel for that r0 and keeps the best-scoring result; ties go to the
// smallest r0.
SemiBlindResult semiblind_deconvolve(const Image& img, const TurbulenceParams& p,
                                     const DeblurSpec& spec);

// Runs `spec` with an explicit kernel.
Image deconvolve_with(const Image& img, const Kernel& k, const DeblurSpec& spec);

// Full dispatch: explicit kernel, model kernel from `p`, or semi-blind.
// `chosen_r0` receives the semi-blind choice when applicable.
Image deblur(const Image& img, const TurbulenceParams& p, const DeblurSpec& spec,
             std::optional<double>* chosen_r0 = nullptr);

}  // namespace turbbench
