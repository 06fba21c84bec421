#pragma once

#include <span>

#include "turbbench/imgcore/image.hpp"
#include "turbbench/imgcore/tv.hpp"

namespace turbbench {

// sum_i ||u - w_i||^2 + mu * regularizer_value(op, u).
double fusion_objective(const Image& u, std::span<const Image> warped, double mu,
                        const GradientOperator& op);

// Minimises fusion_objective with a fixed budget of dual projection steps,
// starting from the temporal mean of `warped`. The result is accepted only if
// its objective does not exceed that of `previous`; otherwise `previous` is
// returned.
Image fuse_frames(std::span<const Image> warped, double mu, const GradientOperator& op,
                  int iterations, const Image& previous);

}  // namespace turbbench
