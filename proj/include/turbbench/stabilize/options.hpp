#pragma once

#include <string>

namespace turbbench {

enum class FlowMethod { LucasKanade, TVL1 };

struct FlowOptions {
  FlowMethod method = FlowMethod::LucasKanade;
  int pyramid_levels = 3;
  int lk_window = 7;
  int lk_iterations = 3;
  // Data weight for intensities expressed in 8-bit gray levels.
  double tvl1_lambda = 0.15;
  double tvl1_tau = 0.25;    // primal step
  double tvl1_sigma = 0.5;   // dual step; tau * sigma <= 1/8
  int tvl1_warps = 5;
  int tvl1_inner_iters = 30;

  // Throws InvalidArgument on an invalid combination.
  void validate() const;
};

enum class StabilizerKind { TemporalAverage, TemporalMedian, MaoGilles };
enum class Regularizer { TV, NLTV };

struct StabilizerSpec {
  StabilizerKind kind = StabilizerKind::TemporalAverage;
  Regularizer regularizer = Regularizer::TV;
  FlowOptions flow;
  int outer_iterations = 5;
  double fusion_mu = 10.0;
  int fusion_iterations = 100;
  int nltv_patch = 5;
  int nltv_search = 11;
  int nltv_neighbors = 10;
  double nltv_h = 10.0;

  void validate() const;
  // Temporal_Average, Temporal_Median, TV-LK, TV-TVL1, NLTV-LK or NLTV-TVL1.
  std::string label() const;
};

std::string to_string(FlowMethod m);
std::string to_string(Regularizer r);

}  // namespace turbbench
