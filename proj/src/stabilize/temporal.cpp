#include "turbbench/stabilize/temporal.hpp"

#include <algorithm>

#include "turbbench/imgcore/errors.hpp"

namespace turbbench {

namespace {

void check_frames(std::span<const Image> frames, const char* what) {
  if (frames.empty()) throw InvalidArgument(std::string(what) + ": empty sequence");
  for (const auto& f : frames) require_same_shape(frames.front(), f, what);
}

}  // namespace

Image temporal_mean(std::span<const Image> frames) {
  check_frames(frames, "temporal_mean");
  const Image& first = frames.front();
  Image out(first.width(), first.height(), first.dyn_range());
  for (const auto& f : frames) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += f[i];
  }
  const double inv = 1.0 / static_cast<double>(frames.size());
  for (double& v : out.pixels()) v *= inv;
  return out;
}

Image temporal_mean(const Sequence& seq) { return temporal_mean(seq.frames); }

Image temporal_median(std::span<const Image> frames) {
  check_frames(frames, "temporal_median");
  const Image& first = frames.front();
  Image out(first.width(), first.height(), first.dyn_range());
  std::vector<double> column(frames.size());
  const auto mid = (frames.size() - 1) / 2;
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t t = 0; t < frames.size(); ++t) column[t] = frames[t][i];
    std::nth_element(column.begin(), column.begin() + static_cast<std::ptrdiff_t>(mid), column.end());
    out[i] = column[mid];
  }
  return out;
}

Image temporal_median(const Sequence& seq) { return temporal_median(seq.frames); }

}  // namespace turbbench
