#include "turbbench/stabilize/nltv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pyramid.hpp"

namespace turbbench {

double WeightGraph::row_sum(std::size_t i) const {
  double s = 0.0;
  for (int j = 0; j < count[i]; ++j) s += weight[i * max_neighbors + j];
  return s;
}

WeightGraph nltv_weights(const Image& guide, const StabilizerSpec& spec) {
  const int w = guide.width();
  const int h = guide.height();
  const std::size_t n = guide.size();
  const int k = spec.nltv_neighbors;
  const int sr = spec.nltv_search / 2;
  const double h2 = spec.nltv_h * spec.nltv_h;

  WeightGraph graph;
  graph.width = w;
  graph.height = h;
  graph.max_neighbors = k;
  graph.count.assign(n, 0);
  graph.index.assign(n * k, -1);
  graph.weight.assign(n * k, 0.0);
  std::vector<double> best(n * k, std::numeric_limits<double>::infinity());

  std::vector<double> diff(n);
  for (int oy = -sr; oy <= sr; ++oy) {
    for (int ox = -sr; ox <= sr; ++ox) {
      if (ox == 0 && oy == 0) continue;
      for (int y = 0; y < h; ++y) {
        const int ys = std::clamp(y + oy, 0, h - 1);
        for (int x = 0; x < w; ++x) {
          const double dv = guide(x, y) - guide(std::clamp(x + ox, 0, w - 1), ys);
          diff[static_cast<std::size_t>(y) * w + x] = dv * dv;
        }
      }
      const auto dist = detail::box_mean(diff, w, h, spec.nltv_patch);
      for (int y = std::max(0, -oy); y < std::min(h, h - oy); ++y) {
        for (int x = std::max(0, -ox); x < std::min(w, w - ox); ++x) {
          const std::size_t i = static_cast<std::size_t>(y) * w + x;
          const double d = dist[i];
          double* row = best.data() + i * k;
          std::int32_t* idx = graph.index.data() + i * k;
          int& cnt = graph.count[i];
          if (cnt == k && !(d < row[k - 1])) continue;
          int pos = cnt < k ? cnt : k - 1;
          while (pos > 0 && row[pos - 1] > d) {
            row[pos] = row[pos - 1];
            idx[pos] = idx[pos - 1];
            --pos;
          }
          row[pos] = d;
          idx[pos] = static_cast<std::int32_t>((y + oy) * w + (x + ox));
          if (cnt < k) ++cnt;
        }
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    const int cnt = graph.count[i];
    if (cnt == 0) continue;
    // Subtracting the row minimum cancels in the normalisation and keeps
    // exp() away from underflow.
    const double dmin = best[i * k];
    double total = 0.0;
    for (int j = 0; j < cnt; ++j) {
      const double v = std::exp(-(best[i * k + j] - dmin) / h2);
      graph.weight[i * k + j] = v;
      total += v;
    }
    for (int j = 0; j < cnt; ++j) graph.weight[i * k + j] /= total;
  }
  return graph;
}

NonlocalGradient::NonlocalGradient(const WeightGraph& graph) : graph_(graph) {
  const std::size_t n = graph.pixels();
  const int k = graph.max_neighbors;
  sqrt_weight_.resize(graph.weight.size());
  std::vector<double> column(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (int j = 0; j < graph.count[i]; ++j) {
      sqrt_weight_[i * k + j] = std::sqrt(graph.weight[i * k + j]);
      column[static_cast<std::size_t>(graph.index[i * k + j])] += graph.weight[i * k + j];
    }
  }
  double max_row = 0.0, max_col = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    max_row = std::max(max_row, graph.row_sum(i));
    max_col = std::max(max_col, column[i]);
  }
  // ||G u||^2 <= 2 sum_i u_i^2 (row_i + col_i).
  norm_sq_bound_ = std::max(2.0 * (max_row + max_col), 1e-12);
}

void NonlocalGradient::apply(std::span<const double> u, std::span<double> out) const {
  const int k = graph_.max_neighbors;
  for (std::size_t i = 0; i < graph_.pixels(); ++i) {
    const int cnt = graph_.count[i];
    for (int j = 0; j < cnt; ++j) {
      out[i * k + j] = sqrt_weight_[i * k + j] * (u[graph_.index[i * k + j]] - u[i]);
    }
    for (int j = cnt; j < k; ++j) out[i * k + j] = 0.0;
  }
}

void NonlocalGradient::adjoint(std::span<const double> p, std::span<double> out) const {
  const int k = graph_.max_neighbors;
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < graph_.pixels(); ++i) {
    for (int j = 0; j < graph_.count[i]; ++j) {
      const double v = sqrt_weight_[i * k + j] * p[i * k + j];
      out[graph_.index[i * k + j]] += v;
      out[i] -= v;
    }
  }
}

}  // namespace turbbench
