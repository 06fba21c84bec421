#pragma once

#include "turbbench/imgcore/image.hpp"
#include "turbbench/stabilize/options.hpp"

namespace turbbench::detail {

inline constexpr double kLkEigenGuard = 1e-8;
// Tikhonov damping of the LK normal equations as a multiple of the level's
// mean gradient energy; keeps weakly textured windows from drifting.
inline constexpr double kLkDamping = 0.3;
// Largest update per refinement step, in pixels of the current level.
inline constexpr double kLkMaxStep = 1.0;

// Single-scale refinement of `init` so that frame(x + d) matches ref(x).
WarpField lk_refine(const Image& ref, const Image& frame, WarpField init, const FlowOptions& o);
WarpField tvl1_refine(const Image& ref, const Image& frame, WarpField init, const FlowOptions& o);

}  // namespace turbbench::detail
