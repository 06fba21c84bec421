#pragma once

#include <vector>

#include "turbbench/imgcore/image.hpp"

namespace turbbench::detail {

// Binomial [1 4 6 4 1]/16 blur then 2x decimation.
Image downsample(const Image& img);

// Finest level first; stops early once a side would drop below 8 pixels.
std::vector<Image> build_pyramid(const Image& base, int levels);

// Bilinear resample of a coarse flow onto a w x h grid, rescaling vectors.
WarpField upsample_flow(const WarpField& coarse, int w, int h);

// Central differences, one-sided at the borders.
void central_gradient(const Image& img, Image& gx, Image& gy);

// Mean over a window x window box, replicating border pixels.
std::vector<double> box_mean(const std::vector<double>& v, int w, int h, int window);

}  // namespace turbbench::detail
