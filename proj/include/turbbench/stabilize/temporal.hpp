#pragma once

#include <span>

#include "turbbench/imgcore/image.hpp"
#include "turbbench/imgcore/sequence.hpp"

namespace turbbench {

Image temporal_mean(std::span<const Image> frames);
Image temporal_mean(const Sequence& seq);

// Pixel-wise median; the lower median for an even frame count.
Image temporal_median(std::span<const Image> frames);
Image temporal_median(const Sequence& seq);

}  // namespace turbbench
