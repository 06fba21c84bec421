#pragma once

#include <cstdint>

#include "turbbench/imgcore/image.hpp"
#include "turbbench/imgcore/kernel.hpp"
#include "turbbench/imgcore/sequence.hpp"
#include "turbbench/turbsim/optics.hpp"

namespace turbbench {

// Correlated Gaussian displacement field: white noise smoothed circularly by a
// Gaussian of std tilt_correlation_px(p), scaled so each pixel's displacement
// has std tilt_sigma_px(p) per axis. Pure function of (p, w, h, seed).
WarpField sample_warp_field(const TurbulenceParams& p, int w, int h, std::uint64_t seed);

// warp(u * k, field) + N(0, noise_sigma^2), unclamped.
Image degrade_frame(const Image& u, const Kernel& k, const WarpField& field, double noise_sigma,
                    std::uint64_t seed);

// Same as degrade_frame for an image that is already blurred.
Image degrade_blurred(const Image& blurred, const WarpField& field, double noise_sigma,
                      std::uint64_t seed);

// params.num_frames frames sharing one kernel; frame i uses
// frame_seed(seed, i, Warp) for its field and frame_seed(seed, i, Noise) for
// its noise.
Sequence simulate_sequence(const Image& u, const TurbulenceParams& p, std::uint64_t seed,
                           int kernel_size = kDefaultKernelSize);

// simulate_sequence with a caller-supplied kernel.
Sequence simulate_sequence(const Image& u, const TurbulenceParams& p, const Kernel& kernel,
                           std::uint64_t seed);

}  // namespace turbbench
