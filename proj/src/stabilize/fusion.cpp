#include "turbbench/stabilize/fusion.hpp"

#include "turbbench/imgcore/errors.hpp"
#include "turbbench/stabilize/temporal.hpp"

namespace turbbench {

double fusion_objective(const Image& u, std::span<const Image> warped, double mu,
                        const GradientOperator& op) {
  double data = 0.0;
  for (const auto& w : warped) {
    require_same_shape(u, w, "fusion_objective");
    for (std::size_t i = 0; i < u.size(); ++i) data += (u[i] - w[i]) * (u[i] - w[i]);
  }
  return data + mu * regularizer_value(op, u.pixels());
}

Image fuse_frames(std::span<const Image> warped, double mu, const GradientOperator& op,
                  int iterations, const Image& previous) {
  if (warped.empty()) throw InvalidArgument("fuse_frames: no frames");
  const Image mean = temporal_mean(warped);
  // sum_i ||u - w_i||^2 = N ||u - mean||^2 + const, hence ROF with mu / 2N.
  const double lambda = mu / (2.0 * static_cast<double>(warped.size()));
  Image candidate(mean.width(), mean.height(), rof_denoise(mean.pixels(), lambda, op, iterations),
                  mean.dyn_range());
  if (fusion_objective(candidate, warped, mu, op) <= fusion_objective(previous, warped, mu, op)) {
    return candidate;
  }
  return previous;
}

}  // namespace turbbench
