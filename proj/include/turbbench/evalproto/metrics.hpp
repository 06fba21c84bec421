#pragma once

#include <string>

#include "turbbench/imgcore/image.hpp"

namespace turbbench {

enum class SsimMode { WindowedMean, Global };

struct SsimOptions {
  int window = 11;
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  SsimMode mode = SsimMode::WindowedMean;

  void validate() const;
};

std::string to_string(SsimMode m);  // "windowed" or "global"
SsimMode parse_ssim_mode(const std::string& text);

// 10 log10(dyn^2 / MSE); +inf for identical images.
double psnr(const Image& gt, const Image& rest);

// WindowedMean: the SSIM map over every valid placement of a normalised
// Gaussian window, averaged. Global: one evaluation with whole-image moments.
double ssim(const Image& gt, const Image& rest, const SsimOptions& opts = {});

}  // namespace turbbench
