#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "scenes.hpp"
#include "turbbench/evalproto/metrics.hpp"
#include "turbbench/imgcore/errors.hpp"
#include "turbbench/imgcore/tv.hpp"
#include "turbbench/imgcore/warp.hpp"
#include "turbbench/stabilize/flow.hpp"
#include "turbbench/stabilize/fusion.hpp"
#include "turbbench/stabilize/mao_gilles.hpp"
#include "turbbench/stabilize/nltv.hpp"
#include "turbbench/stabilize/temporal.hpp"
#include "turbbench/turbsim/simulate.hpp"

using namespace turbbench;
using testing::blob_texture;

namespace {

// Integer translation with clamped borders: out(x, y) = src(x - sx, y - sy).
Image shift_image(const Image& src, int sx, int sy) {
  Image out(src.width(), src.height(), src.dyn_range());
  for (int y = 0; y < src.height(); ++y) {
    for (int x = 0; x < src.width(); ++x) {
      out(x, y) = src(std::clamp(x - sx, 0, src.width() - 1), std::clamp(y - sy, 0, src.height() - 1));
    }
  }
  return out;
}

Sequence make_sequence(std::vector<Image> frames) {
  Sequence seq;
  seq.params.num_frames = static_cast<int>(frames.size());
  seq.frames = std::move(frames);
  return seq;
}

double interior_rms_diff(const Image& a, const Image& b, int margin) {
  double sum = 0.0;
  int n = 0;
  for (int y = margin; y < a.height() - margin; ++y) {
    for (int x = margin; x < a.width() - margin; ++x) {
      sum += (a(x, y) - b(x, y)) * (a(x, y) - b(x, y));
      ++n;
    }
  }
  return std::sqrt(sum / n);
}

StabilizerSpec mg_spec(FlowMethod flow = FlowMethod::LucasKanade, Regularizer reg = Regularizer::TV) {
  StabilizerSpec s;
  s.kind = StabilizerKind::MaoGilles;
  s.flow.method = flow;
  s.regularizer = reg;
  return s;
}

}  // namespace

TEST_CASE("temporal mean basics") {
  const Image f = testing::city_scene(32, 1);
  CHECK(temporal_mean(make_sequence({f, f, f})) == f);
  const Image zero(16, 16, 255.0, 0.0), two(16, 16, 255.0, 2.0);
  CHECK(temporal_mean(make_sequence({zero, two})) == Image(16, 16, 255.0, 1.0));
  CHECK_THROWS_AS(temporal_mean(std::span<const Image>{}), InvalidArgument);
}

TEST_CASE("temporal mean averages noise down by sqrt(N)") {
  const Image gt = testing::city_scene(128, 2);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 5.0);
  std::vector<Image> frames(50, gt);
  for (auto& f : frames) {
    for (double& v : f.pixels()) v += n(rng);
  }
  const Image m = temporal_mean(frames);
  double ss = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) ss += (m[i] - gt[i]) * (m[i] - gt[i]);
  const double sd = std::sqrt(ss / m.size());
  CHECK(sd == doctest::Approx(5.0 / std::sqrt(50.0)).epsilon(0.15));
}

TEST_CASE("temporal median") {
  const Image c(16, 16, 255.0, 42.0);
  CHECK(temporal_median(make_sequence({c, c, c})) == c);
  const Image a(8, 8, 255.0, 0.0), b(8, 8, 255.0, 1.0), d(8, 8, 255.0, 100.0);
  CHECK(temporal_median(make_sequence({a, d, b})) == b);
  const Image e(8, 8, 255.0, 3.0);
  CHECK(temporal_median(make_sequence({d, b, e, a})) == b);  // lower median
}

TEST_CASE("median rejects salt-and-pepper outlier frames better than the mean") {
  const Image gt = testing::city_scene(64, 4);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Image> frames(20, gt);
  for (int i = 0; i < 2; ++i) {
    for (double& v : frames[i * 7].pixels()) {
      const double r = u(rng);
      if (r < 0.3) v = 0.0;
      if (r > 0.7) v = 255.0;
    }
  }
  CHECK(psnr(gt, temporal_median(frames)) > psnr(gt, temporal_mean(frames)));
}

TEST_CASE("temporal filters are permutation invariant") {
  std::mt19937_64 rng(6);
  std::vector<Image> frames;
  for (int i = 0; i < 7; ++i) frames.push_back(testing::random_image(12, 10, rng));
  const Image mean = temporal_mean(frames);
  const Image median = temporal_median(frames);
  for (int t = 0; t < 5; ++t) {
    std::shuffle(frames.begin(), frames.end(), rng);
    CHECK(median == temporal_median(frames));
    const Image m2 = temporal_mean(frames);
    for (std::size_t i = 0; i < m2.size(); ++i) CHECK(m2[i] == doctest::Approx(mean[i]).epsilon(1e-14));
  }
}

TEST_CASE("flow of an image against itself is near zero") {
  std::mt19937_64 rng(7);
  for (const Image& f : {testing::city_scene(64, 8), testing::random_image(48, 40, rng), blob_texture(64, 64, 9)}) {
    for (auto method : {FlowMethod::LucasKanade, FlowMethod::TVL1}) {
      FlowOptions o;
      o.method = method;
      CHECK(estimate_flow(f, f, o).max_magnitude() < 0.05);
    }
  }
}

TEST_CASE("flat images give exactly zero LK flow") {
  const Image flat(32, 32, 255.0, 80.0);
  CHECK(estimate_flow(flat, flat, FlowOptions{}).max_magnitude() == 0.0);
  const Image other(32, 32, 255.0, 90.0);
  CHECK(estimate_flow(flat, other, FlowOptions{}).max_magnitude() == 0.0);
}

TEST_CASE("translation recovery against a block-matching oracle") {
  const int n = 96;
  const Image ref = blob_texture(n, n, 10);
  const Image frame = blob_texture(n, n, 10, 2.0, 1.0);  // frame(x) = ref(x - (2, 1))
  const int margin = 12;
  const int half = 4;

  for (auto method : {FlowMethod::LucasKanade, FlowMethod::TVL1}) {
    FlowOptions o;
    o.method = method;
    const WarpField f = estimate_flow(ref, frame, o);
    double epe = 0.0;
    int count = 0;
    double block_gap = 0.0;
    for (int y = margin; y < n - margin; y += 3) {
      for (int x = margin; x < n - margin; x += 3) {
        const std::size_t i = static_cast<std::size_t>(y) * n + x;
        epe += std::hypot(f.dx[i] - 2.0, f.dy[i] - 1.0);
        // Exhaustive integer search of the displacement minimising patch SSD.
        double best = std::numeric_limits<double>::infinity();
        int bx = 0, by = 0;
        for (int dy = -4; dy <= 4; ++dy) {
          for (int dx = -4; dx <= 4; ++dx) {
            double ssd = 0.0;
            for (int v = -half; v <= half; ++v) {
              for (int u = -half; u <= half; ++u) {
                const double e = frame(x + u + dx, y + v + dy) - ref(x + u, y + v);
                ssd += e * e;
              }
            }
            if (ssd < best) {
              best = ssd;
              bx = dx;
              by = dy;
            }
          }
        }
        block_gap = std::max(block_gap, std::hypot(f.dx[i] - bx, f.dy[i] - by));
        ++count;
      }
    }
    CHECK(epe / count < 0.25);
    CHECK(block_gap < 0.5);
  }
}

TEST_CASE("flow options validation") {
  FlowOptions o;
  o.lk_window = 6;
  CHECK_THROWS_AS(o.validate(), InvalidArgument);
  o = FlowOptions{};
  o.tvl1_tau = 0.5;
  o.tvl1_sigma = 0.5;
  CHECK_THROWS_AS(o.validate(), InvalidArgument);
  o = FlowOptions{};
  o.pyramid_levels = 0;
  CHECK_THROWS_AS(o.validate(), InvalidArgument);
  CHECK_THROWS_AS(estimate_flow(Image(16, 16), Image(16, 17), FlowOptions{}), DimensionMismatch);
}

TEST_CASE("stabilizer labels and validation") {
  StabilizerSpec s;
  CHECK(s.label() == "Temporal_Average");
  s.kind = StabilizerKind::TemporalMedian;
  CHECK(s.label() == "Temporal_Median");
  CHECK(mg_spec().label() == "TV-LK");
  CHECK(mg_spec(FlowMethod::TVL1, Regularizer::NLTV).label() == "NLTV-TVL1");
  s = mg_spec();
  s.nltv_patch = 11;
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
  s = mg_spec();
  s.fusion_mu = 0.0;
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
  s = mg_spec();
  s.nltv_neighbors = 0;
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
}

TEST_CASE("NLTV weights on a constant image are uniform") {
  const StabilizerSpec s = mg_spec(FlowMethod::LucasKanade, Regularizer::NLTV);
  const WeightGraph g = nltv_weights(Image(20, 20, 255.0, 5.0), s);
  for (std::size_t i = 0; i < g.pixels(); ++i) {
    REQUIRE(g.count[i] == s.nltv_neighbors);
    for (int k = 0; k < g.count[i]; ++k) {
      CHECK(g.weight[i * g.max_neighbors + k] == doctest::Approx(1.0 / s.nltv_neighbors).epsilon(1e-12));
    }
  }
}

TEST_CASE("NLTV neighbours of a stripe image sit at stripe-period offsets") {
  const int period = 4;
  Image stripes(40, 40);
  for (int y = 0; y < 40; ++y) {
    for (int x = 0; x < 40; ++x) stripes(x, y) = (x % period) * 50.0;
  }
  const StabilizerSpec s = mg_spec(FlowMethod::LucasKanade, Regularizer::NLTV);
  const WeightGraph g = nltv_weights(stripes, s);
  const int pr = s.nltv_patch / 2;
  const int sr = s.nltv_search / 2;
  for (int y = 10; y < 30; y += 3) {
    for (int x = 10; x < 30; x += 3) {
      const std::size_t i = static_cast<std::size_t>(y) * 40 + x;
      // Exhaustive patch distances over the search window.
      std::vector<double> dist;
      for (int dy = -sr; dy <= sr; ++dy) {
        for (int dx = -sr; dx <= sr; ++dx) {
          if (dx == 0 && dy == 0) continue;
          double d = 0.0;
          for (int v = -pr; v <= pr; ++v) {
            for (int u = -pr; u <= pr; ++u) {
              const double e = stripes(x + dx + u, y + dy + v) - stripes(x + u, y + v);
              d += e * e;
            }
          }
          dist.push_back(d);
        }
      }
      std::sort(dist.begin(), dist.end());
      REQUIRE(g.count[i] == s.nltv_neighbors);
      for (int k = 0; k < g.count[i]; ++k) {
        const int j = g.index[i * g.max_neighbors + k];
        CHECK((j % 40 - x) % period == 0);
      }
      CHECK(dist[static_cast<std::size_t>(s.nltv_neighbors) - 1] == 0.0);
    }
  }
}

TEST_CASE("NLTV weight rows are stochastic and the gradient has an adjoint") {
  std::mt19937_64 rng(11);
  const StabilizerSpec s = mg_spec(FlowMethod::LucasKanade, Regularizer::NLTV);
  for (int t = 0; t < 3; ++t) {
    const Image img = testing::random_image(24, 18, rng);
    const WeightGraph g = nltv_weights(img, s);
    for (std::size_t i = 0; i < g.pixels(); ++i) CHECK(std::abs(g.row_sum(i) - 1.0) < 1e-9);

    const NonlocalGradient op(g);
    std::normal_distribution<double> n;
    std::vector<double> u(op.pixels()), p(op.pixels() * op.components()), gu(p.size()), gtp(u.size());
    for (double& v : u) v = n(rng);
    for (double& v : p) v = n(rng);
    op.apply(u, gu);
    op.adjoint(p, gtp);
    const double lhs = std::inner_product(gu.begin(), gu.end(), p.begin(), 0.0);
    const double rhs = std::inner_product(u.begin(), u.end(), gtp.begin(), 0.0);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  }
}

TEST_CASE("fusion never returns a worse objective than the previous estimate") {
  std::mt19937_64 rng(12);
  std::vector<Image> warped;
  for (int i = 0; i < 5; ++i) warped.push_back(testing::random_image(20, 20, rng));
  const LocalGradient op(20, 20);
  const Image previous = temporal_mean(warped);
  for (double mu : {0.1, 10.0, 1000.0}) {
    const Image fused = fuse_frames(warped, mu, op, 100, previous);
    CHECK(fusion_objective(fused, warped, mu, op) <= fusion_objective(previous, warped, mu, op));
  }
}

TEST_CASE("Mao-Gilles on an undistorted sequence returns the frame") {
  const Image f = testing::city_scene(64, 13);
  StabilizerSpec s = mg_spec();
  s.fusion_mu = 1e-6;
  s.outer_iterations = 2;
  const Image out = mao_gilles(make_sequence({f, f, f, f}), s);
  double worst = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) worst = std::max(worst, std::abs(out[i] - f[i]));
  CHECK(worst < 0.5);
  CHECK_THROWS_AS(mao_gilles(make_sequence({f}), s), InvalidArgument);
}

TEST_CASE("Mao-Gilles beats the mean on randomly translated copies") {
  const Image card = blob_texture(96, 96, 14);
  std::mt19937_64 rng(15);
  std::uniform_int_distribution<int> shift(-2, 2);
  // Five random shifts and their opposites, so the copies are centred on the
  // card the way zero-mean tilts are.
  std::vector<Image> frames;
  for (int i = 0; i < 5; ++i) {
    const int sx = shift(rng);
    const int sy = shift(rng);
    frames.push_back(shift_image(card, sx, sy));
    frames.push_back(shift_image(card, -sx, -sy));
  }
  const Sequence seq = make_sequence(frames);
  const double mean_psnr = psnr(card, temporal_mean(seq));
  StabilizeTrace trace;
  const double mg_psnr = psnr(card, mao_gilles(seq, mg_spec(), &trace));
  MESSAGE("mean " << mean_psnr << " dB, Mao-Gilles " << mg_psnr << " dB");
  CHECK(mg_psnr >= mean_psnr + 1.0);
  for (const auto& it : trace.iterations) CHECK(it.objective_after <= it.objective_before);
}

TEST_CASE("huge fusion weight flattens the output") {
  const Image card = blob_texture(48, 48, 16);
  StabilizerSpec s = mg_spec();
  s.fusion_mu = 1e6;
  s.outer_iterations = 1;
  s.fusion_iterations = 300;
  const Image out = mao_gilles(make_sequence({card, shift_image(card, 1, 0), shift_image(card, 0, 1)}), s);
  CHECK(total_variation(out) < 0.01 * total_variation(card));
}

TEST_CASE("Mao-Gilles is equivariant under integer shifts") {
  const Image gt = blob_texture(80, 80, 17);
  TurbulenceParams p;
  p.path_length_m = 2000.0;
  p.cn2 = 1e-15;
  p.num_frames = 6;
  const Sequence seq = simulate_sequence(gt, p, 18);
  Sequence moved = seq;
  for (auto& f : moved.frames) f = shift_image(f, 3, 2);
  StabilizerSpec s = mg_spec();
  s.outer_iterations = 2;
  const Image a = shift_image(mao_gilles(seq, s), 3, 2);
  const Image b = mao_gilles(moved, s);
  double worst = 0.0;
  for (int y = 16; y < 64; ++y) {
    for (int x = 16; x < 64; ++x) worst = std::max(worst, std::abs(a(x, y) - b(x, y)));
  }
  CHECK(worst < 1.0);
}

TEST_CASE("every Mao-Gilles variant descends per outer iteration") {
  const Image gt = blob_texture(48, 48, 19);
  TurbulenceParams p;
  p.path_length_m = 3000.0;
  p.cn2 = 5e-15;
  p.num_frames = 5;
  p.noise_sigma = 1.0;
  const Sequence seq = simulate_sequence(gt, p, 20);
  for (auto flow : {FlowMethod::LucasKanade, FlowMethod::TVL1}) {
    for (auto reg : {Regularizer::TV, Regularizer::NLTV}) {
      StabilizerSpec s = mg_spec(flow, reg);
      s.outer_iterations = 2;
      StabilizeTrace trace;
      const Image out = stabilize(seq, s, &trace);
      CHECK(trace.iterations.size() == 2);
      for (const auto& it : trace.iterations) CHECK(it.objective_after <= it.objective_before);
      CHECK(psnr(gt, out) > 20.0);
    }
  }
}

TEST_CASE("stabilize dispatches on kind") {
  const Image f = testing::city_scene(32, 21);
  const Sequence seq = make_sequence({f, f});
  CHECK(stabilize(seq, StabilizerSpec{}) == f);
  StabilizerSpec median;
  median.kind = StabilizerKind::TemporalMedian;
  CHECK(stabilize(seq, median) == f);
}
