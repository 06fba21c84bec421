#pragma once

#include <vector>

#include "turbbench/imgcore/image.hpp"
#include "turbbench/imgcore/sequence.hpp"
#include "turbbench/stabilize/options.hpp"

namespace turbbench {

// Fusion objectives of one outer iteration, both evaluated with the warps
// estimated in that iteration.
struct OuterIterationRecord {
  double objective_before = 0.0;  // at the previous estimate
  double objective_after = 0.0;   // at the new estimate
};

struct StabilizeTrace {
  std::vector<OuterIterationRecord> iterations;
};

// Mao-Gilles style stabilisation: start from the temporal mean, then
// repeatedly register every frame to the current estimate and fuse the
// registered frames with a TV or NLTV prior.
Image mao_gilles(const Sequence& seq, const StabilizerSpec& spec, StabilizeTrace* trace = nullptr);

// Dispatch on spec.kind.
Image stabilize(const Sequence& seq, const StabilizerSpec& spec, StabilizeTrace* trace = nullptr);

}  // namespace turbbench
