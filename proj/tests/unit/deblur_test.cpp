#include <doctest.h>

#include <cmath>
#include <random>

#include "scenes.hpp"
#include "turbbench/deblur/deblur.hpp"
#include "turbbench/evalproto/metrics.hpp"
#include "turbbench/imgcore/convolve.hpp"
#include "turbbench/imgcore/errors.hpp"
#include "turbbench/imgcore/tv.hpp"
#include "turbbench/turbsim/optics.hpp"

using namespace turbbench;

namespace {

double max_abs_diff(const Image& a, const Image& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double flux(const Image& img) {
  double s = 0.0;
  for (double v : img.pixels()) s += v;
  return s;
}

double max_gradient(const Image& img) {
  double m = 0.0;
  for (int y = 0; y + 1 < img.height(); ++y) {
    for (int x = 0; x + 1 < img.width(); ++x) {
      m = std::max(m, std::hypot(img(x + 1, y) - img(x, y), img(x, y + 1) - img(x, y)));
    }
  }
  return m;
}

Image piecewise_constant(int n) {
  Image img(n, n, 255.0, 40.0);
  for (int y = n / 4; y < 3 * n / 4; ++y) {
    for (int x = n / 4; x < 3 * n / 4; ++x) img(x, y) = 200.0;
  }
  for (int y = n / 8; y < n / 3; ++y) {
    for (int x = n / 2; x < 7 * n / 8; ++x) img(x, y) = 120.0;
  }
  return img;
}

TurbulenceParams scenario(double L_m, double cn2) {
  TurbulenceParams p;
  p.path_length_m = L_m;
  p.cn2 = cn2;
  return p;
}

}  // namespace

TEST_CASE("Wiener with a delta kernel and no regularisation is the identity") {
  std::mt19937_64 rng(1);
  const Image img = testing::random_image(40, 32, rng);
  CHECK(max_abs_diff(wiener_deconvolve(img, Kernel::delta(), 0.0), img) < 1e-9);
  CHECK_THROWS_AS(wiener_deconvolve(img, Kernel::delta(), -1e-3), InvalidArgument);
}

TEST_CASE("Wiener inverts its own forward blur") {
  const Image gt = testing::city_scene(128, 2);
  const Kernel k = Kernel::gaussian(7, 1.0);
  const Image blurred = convolve_fft(gt, k);
  CHECK(psnr(gt, wiener_deconvolve(blurred, k, 1e-12)) > 60.0);
  CHECK(psnr(gt, wiener_deconvolve(blurred, k, 0.0)) > 60.0);
}

TEST_CASE("Wiener regularisation helps under noise") {
  const Image gt = testing::city_scene(128, 3);
  const Kernel k = Kernel::gaussian(7, 1.0);
  Image noisy = convolve_fft(gt, k);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(0.0, 2.0);
  for (double& v : noisy.pixels()) v += n(rng);
  const double tuned = 4.0 / gt.variance();
  CHECK(psnr(gt, wiener_deconvolve(noisy, k, tuned)) > psnr(gt, wiener_deconvolve(noisy, k, 0.0)));
}

TEST_CASE("Wiener is shift equivariant") {
  std::mt19937_64 rng(5);
  const Image img = testing::random_image(48, 48, rng);
  Image lifted = img;
  for (double& v : lifted.pixels()) v += 37.5;
  const Kernel k = long_exposure_kernel(scenario(2000.0, 5e-15));
  const Image a = wiener_deconvolve(img, k, 1e-3);
  const Image b = wiener_deconvolve(lifted, k, 1e-3);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(b[i] - a[i] - 37.5));
  CHECK(worst < 1e-8);
}

TEST_CASE("Lucy-Richardson") {
  std::mt19937_64 rng(6);
  const Image img = testing::random_image(32, 32, rng);
  for (int iters : {1, 5, 30}) CHECK(max_abs_diff(lucy_richardson(img, Kernel::delta(), iters), img) < 1e-9);

  const Image gt = testing::city_scene(96, 7);
  const Kernel k = Kernel::gaussian(9, 1.5);
  const Image blurred = convolve_fft(gt, k);
  for (int iters : {1, 10, 30}) {
    const Image out = lucy_richardson(blurred, k, iters);
    CHECK(std::abs(flux(out) / flux(blurred) - 1.0) < 1e-3);
  }
  CHECK(psnr(gt, lucy_richardson(blurred, k, 30)) > psnr(gt, blurred));

  Image negative = blurred;
  for (double& v : negative.pixels()) v -= 100.0;
  const Image shifted = lucy_richardson(negative, k, 10);
  CHECK(std::abs(flux(shifted) / flux(negative) - 1.0) < 1e-3);
}

TEST_CASE("TV deconvolution limits") {
  std::mt19937_64 rng(8);
  const Image img = testing::random_image(32, 32, rng);
  CHECK(max_abs_diff(tv_deconvolve(img, Kernel::delta(), 1e-9, 50), img) < 1e-6);
  const Image flat = tv_deconvolve(img, Kernel::box(3), 1e6, 100);
  CHECK(total_variation(flat) < 0.01 * total_variation(img));
  CHECK_THROWS_AS(tv_deconvolve(img, Kernel::delta(), 0.0, 10), InvalidArgument);
  CHECK_THROWS_AS(tv_deconvolve(img, Kernel::delta(), 1.0, 0), InvalidArgument);
}

TEST_CASE("TV deconvolution sharpens a blurred piecewise-constant target") {
  const Image target = piecewise_constant(64);
  const Kernel box = Kernel::box(5);
  const Image blurred = convolve_fft(target, box);
  const Image out = tv_deconvolve(blurred, box, 0.01, 200);
  CHECK(max_gradient(out) > max_gradient(blurred));
}

TEST_CASE("TV deconvolution objective never increases") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> lam(0.5, 20.0);
  std::uniform_int_distribution<int> ks(1, 3);
  for (int t = 0; t < 10; ++t) {
    const Image img = testing::random_image(32, 32, rng);
    const Kernel k = Kernel::gaussian(2 * ks(rng) + 1, 1.2);
    const double lambda = lam(rng);
    TvDeconvTrace trace;
    const Image out = tv_deconvolve(img, k, lambda, 60, &trace);
    REQUIRE(trace.objective.size() == 60);
    double prev = tv_deconv_objective(img, img, k, lambda);
    for (double f : trace.objective) {
      CHECK(f <= prev);
      prev = f;
    }
    CHECK(tv_deconv_objective(out, img, k, lambda) == doctest::Approx(trace.objective.back()));
  }
}

TEST_CASE("sharpness score") {
  CHECK(sharpness_score(Image(32, 32, 255.0, 50.0)) == 0.0);
  Image out_of_range(32, 32, 255.0, 50.0);
  for (int i = 0; i < 64; ++i) out_of_range[i] = -5.0;
  CHECK(sharpness_score(out_of_range) < 0.0);
  const Image sharp = piecewise_constant(64);
  CHECK(sharpness_score(sharp) > sharpness_score(convolve_fft(sharp, Kernel::gaussian(9, 2.0))));
}

TEST_CASE("semi-blind search picks the true r0 among decoys") {
  const auto p = scenario(2000.0, 5e-15);
  const double r0 = *fried_parameter(p);
  const Image gt = testing::city_scene(256, 10);
  const Image blurred = convolve_fft(gt, long_exposure_kernel_for_r0(p, r0).kernel);
  for (auto method : {DeblurMethod::Wiener, DeblurMethod::LucyRichardson}) {
    DeblurSpec spec;
    spec.method = method;
    spec.kernel = SemiBlind{{4.0 * r0, r0, r0 / 4.0}};
    const SemiBlindResult res = semiblind_deconvolve(blurred, p, spec);
    CHECK(res.r0 == r0);
    CHECK(res.scores.size() == 3);
    CHECK(res.scores[1] == *std::max_element(res.scores.begin(), res.scores.end()));
  }
}

TEST_CASE("semi-blind degenerate grids") {
  const auto p = scenario(1000.0, 1e-15);
  const Image gt = testing::city_scene(64, 11);
  DeblurSpec spec;
  spec.kernel = SemiBlind{{0.05}};
  CHECK(semiblind_deconvolve(gt, p, spec).r0 == 0.05);

  const Image flat(64, 64, 255.0, 90.0);
  spec.kernel = SemiBlind{{0.1, 0.02, 0.05}};
  const SemiBlindResult res = semiblind_deconvolve(flat, p, spec);
  CHECK(res.r0 == 0.02);
  CHECK(max_abs_diff(res.image, flat) < 1e-9);

  spec.kernel = SemiBlind{{}};
  CHECK_THROWS_AS(semiblind_deconvolve(gt, p, spec), InvalidArgument);
  spec.kernel = SemiBlind{{0.1, -0.2}};
  CHECK_THROWS_AS(spec.validate(), InvalidArgument);
}

TEST_CASE("deblur dispatch and labels") {
  const auto p = scenario(2000.0, 5e-15);
  const Image img = convolve_fft(testing::city_scene(64, 12), long_exposure_kernel(p));
  DeblurSpec spec;
  CHECK(spec.label() == "wiener");
  CHECK(deblur(img, p, spec) == wiener_deconvolve(img, long_exposure_kernel(p), spec.nsr));
  spec.kernel = Kernel::box(3);
  CHECK(deblur(img, p, spec) == wiener_deconvolve(img, Kernel::box(3), spec.nsr));
  spec.method = DeblurMethod::LucyRichardson;
  spec.kernel = SemiBlind{default_r0_grid()};
  CHECK(spec.label() == "semiblind-lr");
  std::optional<double> chosen;
  deblur(img, p, spec, &chosen);
  CHECK(chosen.has_value());
  spec = DeblurSpec{};
  spec.method = DeblurMethod::TVDeconv;
  CHECK(spec.label() == "tv");
  spec.lr_iterations = 0;
  CHECK_THROWS_AS(spec.validate(), InvalidArgument);
  spec = DeblurSpec{};
  spec.nsr = -1.0;
  CHECK_THROWS_AS(spec.validate(), InvalidArgument);
}

TEST_CASE("default r0 grid is sorted and positive") {
  const auto grid = default_r0_grid();
  CHECK(grid.size() == 17);
  CHECK(std::is_sorted(grid.begin(), grid.end()));
  CHECK(grid.front() > 0.0);
}
