#pragma once

#include "turbbench/imgcore/image.hpp"
#include "turbbench/stabilize/options.hpp"

namespace turbbench {

// Backward flow: warp_image(frame, field) approximates ref. Intensities are
// divided by dyn_range before estimation. Pixels whose structure tensor has
// both eigenvalues below 1e-8 get zero Lucas-Kanade updates.
WarpField estimate_flow(const Image& ref, const Image& frame, const FlowOptions& opts);

}  // namespace turbbench
