#include <cmath>

#include "flow_internal.hpp"
#include "pyramid.hpp"
#include "turbbench/imgcore/tv.hpp"
#include "turbbench/imgcore/warp.hpp"

namespace turbbench::detail {

namespace {

constexpr double kGradIsZero = 1e-10;
// tvl1_lambda is expressed for 8-bit gray levels; flow runs on [0, 1].
constexpr double kLambdaScale = 255.0;

void project_unit_ball(std::vector<double>& p) {
  for (std::size_t i = 0; i < p.size(); i += 2) {
    const double norm = std::hypot(p[i], p[i + 1]);
    if (norm > 1.0) {
      p[i] /= norm;
      p[i + 1] /= norm;
    }
  }
}

}  // namespace

// Linearised TV-L1 solved per warp by a primal-dual iteration on both flow
// components, with the pointwise L1 thresholding as the primal prox.
WarpField tvl1_refine(const Image& ref, const Image& frame, WarpField d, const FlowOptions& o) {
  const int w = ref.width();
  const int h = ref.height();
  const std::size_t n = ref.size();
  const LocalGradient grad(w, h);
  const double lt = o.tvl1_tau * o.tvl1_lambda * kLambdaScale;

  Image fx, fy;
  central_gradient(frame, fx, fy);

  std::vector<double> p1(2 * n, 0.0), p2(2 * n, 0.0), g(2 * n), div1(n), div2(n);
  std::vector<double> grad2(n), rho_c(n);
  std::vector<double> bar1 = d.dx, bar2 = d.dy;

  for (int warp = 0; warp < o.tvl1_warps; ++warp) {
    const Image iw = warp_image(frame, d, BorderMode::Clamp);
    const Image iwx = warp_image(fx, d, BorderMode::Clamp);
    const Image iwy = warp_image(fy, d, BorderMode::Clamp);
    for (std::size_t i = 0; i < n; ++i) {
      grad2[i] = iwx[i] * iwx[i] + iwy[i] * iwy[i];
      rho_c[i] = iw[i] - iwx[i] * d.dx[i] - iwy[i] * d.dy[i] - ref[i];
    }
    bar1 = d.dx;
    bar2 = d.dy;

    for (int k = 0; k < o.tvl1_inner_iters; ++k) {
      grad.apply(bar1, g);
      for (std::size_t j = 0; j < 2 * n; ++j) p1[j] += o.tvl1_sigma * g[j];
      project_unit_ball(p1);
      grad.apply(bar2, g);
      for (std::size_t j = 0; j < 2 * n; ++j) p2[j] += o.tvl1_sigma * g[j];
      project_unit_ball(p2);

      // adjoint(p) = -div(p)
      grad.adjoint(p1, div1);
      grad.adjoint(p2, div2);
      for (std::size_t i = 0; i < n; ++i) {
        const double v1 = d.dx[i] - o.tvl1_tau * div1[i];
        const double v2 = d.dy[i] - o.tvl1_tau * div2[i];
        const double rho = rho_c[i] + iwx[i] * v1 + iwy[i] * v2;
        double u1 = v1, u2 = v2;
        if (rho < -lt * grad2[i]) {
          u1 += lt * iwx[i];
          u2 += lt * iwy[i];
        } else if (rho > lt * grad2[i]) {
          u1 -= lt * iwx[i];
          u2 -= lt * iwy[i];
        } else if (grad2[i] > kGradIsZero) {
          u1 -= rho * iwx[i] / grad2[i];
          u2 -= rho * iwy[i] / grad2[i];
        }
        bar1[i] = 2.0 * u1 - d.dx[i];
        bar2[i] = 2.0 * u2 - d.dy[i];
        d.dx[i] = u1;
        d.dy[i] = u2;
      }
    }
  }
  return d;
}

}  // namespace turbbench::detail
