#pragma once

#include <cstdint>
#include <vector>

#include "turbbench/imgcore/image.hpp"
#include "turbbench/imgcore/tv.hpp"
#include "turbbench/stabilize/options.hpp"

namespace turbbench {

// Sparse row-stochastic graph: pixel i links to neighbors(i) other pixels.
struct WeightGraph {
  int width = 0;
  int height = 0;
  int max_neighbors = 0;
  std::vector<int> count;          // neighbours actually stored per pixel
  std::vector<std::int32_t> index; // pixels * max_neighbors, -1 when unused
  std::vector<double> weight;      // same layout

  std::size_t pixels() const { return count.size(); }
  double row_sum(std::size_t i) const;
};

// For each pixel, the nltv_neighbors in-bounds offsets of the search window
// (self excluded) whose patches are closest in mean squared difference d;
// weights exp(-d / h^2) normalised per row. Ties keep raster order of offsets.
WeightGraph nltv_weights(const Image& guide, const StabilizerSpec& spec);

// (G u)(i, j) = sqrt(w_ij) * (u(n_ij) - u(i)).
class NonlocalGradient final : public GradientOperator {
 public:
  explicit NonlocalGradient(const WeightGraph& graph);

  std::size_t pixels() const override { return graph_.pixels(); }
  int components() const override { return graph_.max_neighbors; }
  void apply(std::span<const double> u, std::span<double> out) const override;
  void adjoint(std::span<const double> p, std::span<double> out) const override;
  double norm_sq_bound() const override { return norm_sq_bound_; }

 private:
  const WeightGraph& graph_;
  std::vector<double> sqrt_weight_;
  double norm_sq_bound_ = 0.0;
};

}  // namespace turbbench
