#include "turbbench/stabilize/mao_gilles.hpp"

#include <memory>

#include "turbbench/imgcore/errors.hpp"
#include "turbbench/imgcore/tv.hpp"
#include "turbbench/imgcore/warp.hpp"
#include "turbbench/stabilize/flow.hpp"
#include "turbbench/stabilize/fusion.hpp"
#include "turbbench/stabilize/nltv.hpp"
#include "turbbench/stabilize/temporal.hpp"

namespace turbbench {

Image mao_gilles(const Sequence& seq, const StabilizerSpec& spec, StabilizeTrace* trace) {
  spec.validate();
  if (seq.frames.size() < 2) throw InvalidArgument("mao_gilles: needs at least 2 frames");
  for (const auto& f : seq.frames) require_same_shape(seq.frames.front(), f, "mao_gilles");

  Image estimate = temporal_mean(seq);
  std::vector<Image> warped(seq.frames.size());
  const LocalGradient local(estimate.width(), estimate.height());

  for (int t = 0; t < spec.outer_iterations; ++t) {
    std::vector<WarpField> fields;
    fields.reserve(seq.frames.size());
    for (const auto& frame : seq.frames) fields.push_back(estimate_flow(estimate, frame, spec.flow));
    // Tilts are zero-mean across frames; a flow component shared by every
    // frame is estimator bias, not motion.
    WarpField mean(estimate.width(), estimate.height());
    for (const auto& f : fields) {
      for (std::size_t k = 0; k < f.dx.size(); ++k) {
        mean.dx[k] += f.dx[k];
        mean.dy[k] += f.dy[k];
      }
    }
    const double inv = 1.0 / static_cast<double>(fields.size());
    for (auto& f : fields) {
      for (std::size_t k = 0; k < f.dx.size(); ++k) {
        f.dx[k] -= mean.dx[k] * inv;
        f.dy[k] -= mean.dy[k] * inv;
      }
    }
    for (std::size_t i = 0; i < seq.frames.size(); ++i) {
      warped[i] = warp_image(seq.frames[i], fields[i], BorderMode::Clamp, Interpolation::Cubic);
    }

    WeightGraph graph;
    std::unique_ptr<NonlocalGradient> nonlocal;
    const GradientOperator* op = &local;
    if (spec.regularizer == Regularizer::NLTV) {
      graph = nltv_weights(estimate, spec);
      nonlocal = std::make_unique<NonlocalGradient>(graph);
      op = nonlocal.get();
    }

    const double before = fusion_objective(estimate, warped, spec.fusion_mu, *op);
    estimate = fuse_frames(warped, spec.fusion_mu, *op, spec.fusion_iterations, estimate);
    if (trace != nullptr) {
      trace->iterations.push_back(
          {before, fusion_objective(estimate, warped, spec.fusion_mu, *op)});
    }
  }
  return estimate;
}

Image stabilize(const Sequence& seq, const StabilizerSpec& spec, StabilizeTrace* trace) {
  switch (spec.kind) {
    case StabilizerKind::TemporalAverage:
      return temporal_mean(seq);
    case StabilizerKind::TemporalMedian:
      return temporal_median(seq);
    case StabilizerKind::MaoGilles:
    default:
      return mao_gilles(seq, spec, trace);
  }
}

}  // namespace turbbench
