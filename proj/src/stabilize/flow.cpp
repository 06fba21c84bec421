#include "turbbench/stabilize/flow.hpp"

#include "flow_internal.hpp"
#include "pyramid.hpp"
#include "turbbench/imgcore/errors.hpp"

namespace turbbench {

namespace {

Image normalized(const Image& img) {
  Image out(img.width(), img.height(), 1.0);
  const double inv = 1.0 / img.dyn_range();
  for (std::size_t i = 0; i < img.size(); ++i) out[i] = img[i] * inv;
  return out;
}

}  // namespace

WarpField estimate_flow(const Image& ref, const Image& frame, const FlowOptions& opts) {
  require_same_shape(ref, frame, "estimate_flow");
  opts.validate();
  const auto ref_pyr = detail::build_pyramid(normalized(ref), opts.pyramid_levels);
  const auto frame_pyr = detail::build_pyramid(normalized(frame), opts.pyramid_levels);

  WarpField flow;
  for (int level = static_cast<int>(ref_pyr.size()) - 1; level >= 0; --level) {
    const Image& r = ref_pyr[level];
    const Image& f = frame_pyr[level];
    flow = flow.size() == 0 ? WarpField(r.width(), r.height())
                            : detail::upsample_flow(flow, r.width(), r.height());
    flow = opts.method == FlowMethod::LucasKanade ? detail::lk_refine(r, f, std::move(flow), opts)
                                                  : detail::tvl1_refine(r, f, std::move(flow), opts);
  }
  return flow;
}

}  // namespace turbbench
