#include "turbbench/stabilize/options.hpp"

#include "turbbench/imgcore/errors.hpp"

namespace turbbench {

void FlowOptions::validate() const {
  if (pyramid_levels < 1) throw InvalidArgument("flow: pyramid_levels must be >= 1");
  if (lk_window < 1 || lk_window % 2 == 0) throw InvalidArgument("flow: lk_window must be odd");
  if (lk_iterations < 1) throw InvalidArgument("flow: lk_iterations must be >= 1");
  if (!(tvl1_lambda > 0.0)) throw InvalidArgument("flow: tvl1_lambda must be > 0");
  if (!(tvl1_tau > 0.0) || !(tvl1_sigma > 0.0)) {
    throw InvalidArgument("flow: tvl1_tau and tvl1_sigma must be > 0");
  }
  // Primal-dual stability with ||grad||^2 <= 8.
  if (tvl1_tau * tvl1_sigma > 0.125 + 1e-12) {
    throw InvalidArgument("flow: tvl1_tau * tvl1_sigma must be <= 1/8");
  }
  if (tvl1_warps < 1 || tvl1_inner_iters < 1) {
    throw InvalidArgument("flow: tvl1_warps and tvl1_inner_iters must be >= 1");
  }
}

void StabilizerSpec::validate() const {
  if (kind != StabilizerKind::MaoGilles) return;
  flow.validate();
  if (outer_iterations < 1) throw InvalidArgument("stabilizer: outer_iterations must be >= 1");
  if (fusion_iterations < 1) throw InvalidArgument("stabilizer: fusion_iterations must be >= 1");
  if (!(fusion_mu > 0.0)) throw InvalidArgument("stabilizer: fusion_mu must be > 0");
  {
    if (nltv_patch < 1 || nltv_patch % 2 == 0 || nltv_search < 3 || nltv_search % 2 == 0) {
      throw InvalidArgument("stabilizer: nltv_patch and nltv_search must be odd");
    }
    if (nltv_patch >= nltv_search) {
      throw InvalidArgument("stabilizer: nltv_patch must be smaller than nltv_search");
    }
    if (nltv_neighbors < 1) throw InvalidArgument("stabilizer: nltv_neighbors must be >= 1");
    if (!(nltv_h > 0.0)) throw InvalidArgument("stabilizer: nltv_h must be > 0");
  }
}

std::string to_string(FlowMethod m) { return m == FlowMethod::LucasKanade ? "LK" : "TVL1"; }

std::string to_string(Regularizer r) { return r == Regularizer::TV ? "TV" : "NLTV"; }

std::string StabilizerSpec::label() const {
  switch (kind) {
    case StabilizerKind::TemporalAverage:
      return "Temporal_Average";
    case StabilizerKind::TemporalMedian:
      return "Temporal_Median";
    case StabilizerKind::MaoGilles:
    default:
      return to_string(regularizer) + "-" + to_string(flow.method);
  }
}

}  // namespace turbbench
