#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>

#include "scenes.hpp"
#include "turbbench/imgcore/convolve.hpp"
#include "turbbench/imgcore/image_io.hpp"
#include "turbbench/turbsim/dataset.hpp"
#include "turbbench/turbsim/optics.hpp"
#include "turbbench/turbsim/seed.hpp"
#include "turbbench/turbsim/simulate.hpp"

using namespace turbbench;
namespace fs = std::filesystem;

namespace {

TurbulenceParams params(double L_m, double cn2) {
  TurbulenceParams p;
  p.path_length_m = L_m;
  p.cn2 = cn2;
  return p;
}

long double r0_oracle(long double lambda, long double cn2, long double L) {
  const long double pi = 3.141592653589793238462643383279502884L;
  const long double k = 2.0L * pi / lambda;
  return std::pow(0.423L * k * k * cn2 * L, -0.6L);
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("tb_turbsim_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string file_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::map<std::string, std::string> tree_bytes(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = file_bytes(e.path());
  }
  return out;
}

}  // namespace

TEST_CASE("seed mixing primitives") {
  CHECK(splitmix64(0) == 0xE220A8397B1DCDAFULL);
  CHECK(hash_text("") == 0xCBF29CE484222325ULL);
  CHECK(hash_text("a") == 0xAF63DC4C8601EC8CULL);
  std::set<std::uint64_t> seeds;
  for (double L : {1.0, 2.0}) {
    for (int a : {1, 3}) {
      for (int b : {14, 15}) {
        seeds.insert(sequence_seed(7, "scene", L, a, b));
        seeds.insert(sequence_seed(8, "scene", L, a, b));
        seeds.insert(sequence_seed(7, "other", L, a, b));
      }
    }
  }
  CHECK(seeds.size() == 24);
  CHECK(frame_seed(5, 0, FrameStream::Warp) != frame_seed(5, 0, FrameStream::Noise));
  CHECK(frame_seed(5, 0, FrameStream::Warp) != frame_seed(5, 1, FrameStream::Warp));
}

TEST_CASE("cn2 interpretation") {
  CHECK(interpret_cn2(1, 14) == 1e-14);
  CHECK(interpret_cn2(9, 14) == 9e-14);
  CHECK(interpret_cn2(1, 17) == 1e-17);
  CHECK(interpret_cn2(7, 16) == 7e-16);
}

TEST_CASE("Fried parameter matches the closed form") {
  const auto p = params(2000.0, 1e-15);
  const auto r0 = fried_parameter(p);
  REQUIRE(r0.has_value());
  CHECK(*r0 == doctest::Approx(static_cast<double>(r0_oracle(0.525e-6L, 1e-15L, 2000.0L))).epsilon(1e-13));
  CHECK(*r0 == doctest::Approx(0.056).epsilon(0.02));
  CHECK_FALSE(fried_parameter(params(2000.0, 0.0)).has_value());
  CHECK_THROWS_AS(fried_parameter(params(2000.0, -1e-15)), InvalidArgument);
  CHECK_THROWS_AS(fried_parameter(params(-5.0, 1e-15)), InvalidArgument);
}

TEST_CASE("Fried parameter scales as L^(-3/5)") {
  for (double cn2 : {1e-17, 3e-15, 9e-14}) {
    for (double L : {1000.0, 1500.0, 3000.0}) {
      const double ratio = *fried_parameter(params(2 * L, cn2)) / *fried_parameter(params(L, cn2));
      CHECK(std::abs(ratio - std::pow(2.0, -0.6)) < 1e-12);
    }
  }
}

TEST_CASE("no turbulence gives the diffraction kernel") {
  const auto p = params(2000.0, 0.0);
  const Kernel k = long_exposure_kernel(p);
  CHECK(k.taps() == long_exposure_kernel_for_r0(p, std::nullopt).kernel.taps());
  const Kernel turbulent = long_exposure_kernel(params(2000.0, 1e-15));
  CHECK(turbulent.second_moment() > k.second_moment());
}

TEST_CASE("kernel shape properties") {
  const Kernel k = long_exposure_kernel(params(3000.0, 5e-15));
  CHECK(std::abs(k.sum() - 1.0) < 1e-6);
  const int n = k.size();
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      CHECK(k(i, j) >= -1e-12);
      CHECK(k(i, j) == doctest::Approx(k(n - 1 - i, j)).epsilon(1e-9));
      CHECK(k(i, j) == doctest::Approx(k(j, i)).epsilon(1e-9));
    }
  }
  CHECK_THROWS_AS(long_exposure_kernel(params(1000.0, 1e-15), 30), InvalidArgument);
  CHECK_THROWS_AS(long_exposure_kernel(params(1000.0, 1e-15), 1), InvalidArgument);
}

TEST_CASE("kernel DC gain and monotone spread over the default grid") {
  const SweepGrid grid;
  std::map<std::pair<double, double>, double> moment;
  for (const auto& c : grid.combinations()) {
    const Kernel k = long_exposure_kernel(params(c.L_km * 1000.0, c.cn2()));
    CHECK(std::abs(k.sum() - 1.0) < 1e-6);
    moment[{c.L_km, c.cn2()}] = k.second_moment();
  }
  std::set<double> cn2s;
  for (const auto& [key, m] : moment) cn2s.insert(key.second);
  for (double L : grid.distances_km) {
    double prev = 0.0;
    for (double cn2 : cn2s) {
      CHECK(moment[{L, cn2}] >= prev);
      prev = moment[{L, cn2}];
    }
  }
  for (double cn2 : cn2s) {
    double prev = 0.0;
    for (double L : grid.distances_km) {
      CHECK(moment[{L, cn2}] >= prev);
      prev = moment[{L, cn2}];
    }
  }
  CHECK(long_exposure_kernel(params(4000.0, 9e-14)).second_moment() >
        long_exposure_kernel(params(1000.0, 1e-17)).second_moment());
}

TEST_CASE("tilt statistics follow the declared formulas") {
  for (double L : {1000.0, 4000.0}) {
    for (double cn2 : {1e-16, 1e-15, 9e-14}) {
      const auto p = params(L, cn2);
      const double r0 = static_cast<double>(r0_oracle(0.525e-6L, cn2, L));
      const double expect = std::min(8.0, 0.36 * (0.525e-6 / r0) * std::pow(0.054 / r0, 1.0 / 6.0) * 0.3 / 4e-6);
      CHECK(tilt_sigma_px(p) == doctest::Approx(expect).epsilon(1e-9));
    }
  }
  CHECK(tilt_sigma_px(params(4000.0, 9e-14)) == 8.0);
  CHECK(tilt_correlation_px(params(1000.0, 1e-15)) == 4);
  auto wide = params(1000.0, 1e-15);
  wide.pixel_pitch_m = 1e-7;
  CHECK(tilt_correlation_px(wide) == static_cast<int>(std::lround(0.3 * 0.525e-6 / (0.054 * 1e-7))));
}

TEST_CASE("warp field sampling") {
  CHECK(sample_warp_field(params(1000.0, 0.0), 32, 32, 1).max_magnitude() == 0.0);
  const auto p = params(2000.0, 1e-15);
  const WarpField a = sample_warp_field(p, 40, 30, 99);
  const WarpField b = sample_warp_field(p, 40, 30, 99);
  CHECK(a.dx == b.dx);
  CHECK(a.dy == b.dy);
  CHECK(a.dx != sample_warp_field(p, 40, 30, 100).dx);
  CHECK_THROWS_AS(sample_warp_field(p, 7, 30, 1), InvalidArgument);
}

TEST_CASE("warp field Monte-Carlo moments at one pixel") {
  const auto p = params(2000.0, 1e-15);
  const double sigma = tilt_sigma_px(p);
  const int n = 10000;
  double sx = 0.0, sxx = 0.0, sy = 0.0, syy = 0.0;
  for (int s = 0; s < n; ++s) {
    const WarpField f = sample_warp_field(p, 16, 16, frame_seed(2024, s, FrameStream::Warp));
    const double dx = f.dx[8 * 16 + 8];
    const double dy = f.dy[8 * 16 + 8];
    sx += dx;
    sxx += dx * dx;
    sy += dy;
    syy += dy * dy;
  }
  const double mx = sx / n;
  const double my = sy / n;
  const double sdx = std::sqrt((sxx - n * mx * mx) / (n - 1));
  const double sdy = std::sqrt((syy - n * my * my) / (n - 1));
  CHECK(std::abs(mx) < 4.0 * sigma / 100.0);
  CHECK(std::abs(my) < 4.0 * sigma / 100.0);
  CHECK(std::abs(sdx / sigma - 1.0) < 0.05);
  CHECK(std::abs(sdy / sigma - 1.0) < 0.05);
}

TEST_CASE("degrade_frame") {
  std::mt19937_64 rng(11);
  const Image u = testing::random_image(32, 32, rng);
  CHECK(degrade_frame(u, Kernel::delta(), WarpField(32, 32), 0.0, 5) == u);

  const auto p = params(2000.0, 5e-15);
  const Kernel k = long_exposure_kernel(p);
  const WarpField f = sample_warp_field(p, 32, 32, 3);
  CHECK(degrade_frame(u, k, f, 0.0, 1) == degrade_frame(u, k, f, 0.0, 2));

  const Image flat(256, 256, 255.0, 100.0);
  const Image noisy = degrade_frame(flat, Kernel::delta(), WarpField(256, 256), 2.0, 77);
  const double mean = noisy.mean();
  CHECK(std::sqrt(noisy.variance()) == doctest::Approx(2.0).epsilon(0.05));
  CHECK(mean == doctest::Approx(100.0).epsilon(0.01));
  CHECK_THROWS_AS(degrade_frame(u, k, f, -1.0, 1), InvalidArgument);
}

TEST_CASE("noise-free degradation preserves mean intensity") {
  const Image gt = testing::city_scene(256, 3);
  for (double cn2 : {1e-15, 1e-14, 9e-14}) {
    const auto p = params(4000.0, cn2);
    const Image out = degrade_frame(gt, long_exposure_kernel(p), sample_warp_field(p, 256, 256, 8), 0.0, 0);
    CHECK(std::abs(out.mean() / gt.mean() - 1.0) < 0.005);
  }
}

TEST_CASE("simulate_sequence") {
  const Image gt = testing::city_scene(64, 1);
  auto p = params(1000.0, 0.0);
  p.num_frames = 1;
  const Sequence one = simulate_sequence(gt, p, 42);
  REQUIRE(one.frames.size() == 1);
  const Image diffraction = convolve_fft(gt, long_exposure_kernel_for_r0(p, std::nullopt).kernel);
  CHECK(one.frames[0] == diffraction);

  p = params(2000.0, 1e-14);
  p.num_frames = 4;
  const Sequence a = simulate_sequence(gt, p, 42);
  const Sequence b = simulate_sequence(gt, p, 42);
  CHECK(a.frames == b.frames);
  CHECK(a.seed == 42);
  CHECK(a.params == p);
  const WarpField f0 = sample_warp_field(p, 64, 64, frame_seed(42, 0, FrameStream::Warp));
  const WarpField f1 = sample_warp_field(p, 64, 64, frame_seed(42, 1, FrameStream::Warp));
  std::size_t differ = 0;
  for (std::size_t i = 0; i < f0.size(); ++i) differ += std::abs(f0.dx[i] - f1.dx[i]) > 1e-6 ? 1 : 0;
  CHECK(differ >= f0.size() / 100);
  CHECK(a.frames[0] != a.frames[1]);
}

TEST_CASE("sweep grid") {
  const SweepGrid grid;
  CHECK(grid.size() == 80);
  const auto combos = grid.combinations();
  CHECK(combos.size() == 80);
  CHECK(combos.front() == Combination{1.0, 1, 14});
  CHECK(combos[1] == Combination{1.0, 1, 15});
  CHECK(combos.back() == Combination{4.0, 9, 17});
  CHECK(Combination{2.0, 5, 15}.dir_name() == "L2km_a5_b15");
  CHECK(Combination{2.5, 5, 15}.dir_name() == "L2.5km_a5_b15");
  const SweepGrid parsed = SweepGrid::parse("L=2;b=15,16");
  CHECK(parsed.size() == 10);
  CHECK(SweepGrid::parse(parsed.to_string()).combinations() == parsed.combinations());
  CHECK(SweepGrid::parse("default").size() == 80);
  CHECK_THROWS_AS(SweepGrid::parse("L=1;q=3"), InvalidArgument);
  CHECK_THROWS_AS(SweepGrid::parse("L=-1"), InvalidArgument);
}

TEST_CASE("minimal dataset build") {
  TempDir tmp;
  fs::create_directories(tmp.path / "gt");
  save_image(testing::city_scene(300, 2), tmp.path / "gt" / "city.png");
  const DatasetManifest m = build_dataset(tmp.path / "gt", SweepGrid::parse("L=2;a=5;b=15"),
                                          tmp.path / "out", 9);
  REQUIRE(m.entries.size() == 1);
  const auto& e = m.entries[0];
  CHECK(e.path == "city/L2km_a5_b15");
  CHECK(e.n_frames == 50);
  CHECK(e.seed == sequence_seed(9, "city", 2.0, 5, 15));
  const fs::path dir = tmp.path / "out" / e.path;
  std::size_t files = 0;
  for (const auto& f : fs::directory_iterator(dir)) {
    (void)f;
    ++files;
  }
  CHECK(files == 52);
  CHECK(fs::exists(dir / "gt.png"));
  CHECK(fs::exists(dir / "frame_049.png"));
  CHECK(load_image(dir / "gt.png").width() == 256);

  const SequenceInfo info = read_params_json(dir / "params.json");
  CHECK(info.params.cn2 == 5e-15);
  CHECK(info.params.path_length_m == 2000.0);
  CHECK(info.seed == e.seed);
  CHECK(info.combo == e.combo);

  const DatasetManifest back = read_manifest(tmp.path / "out" / "manifest.csv");
  REQUIRE(back.entries.size() == 1);
  CHECK(back.entries[0].seed == e.seed);
  CHECK(back.entries[0].cn2 == e.cn2);
  CHECK(load_sequence(dir).frames.size() == 50);
}

TEST_CASE("dataset bytes are independent of worker count") {
  TempDir tmp;
  fs::create_directories(tmp.path / "gt");
  save_image(testing::city_scene(64, 4), tmp.path / "gt" / "a.png");
  save_image(testing::city_scene(64, 5), tmp.path / "gt" / "b.png");
  DatasetOptions serial;
  serial.crop_size = 64;
  serial.base.num_frames = 3;
  serial.base.noise_sigma = 1.0;
  DatasetOptions parallel = serial;
  parallel.workers = 4;
  const SweepGrid grid = SweepGrid::parse("L=1,4;a=1,9;b=14,17");
  build_dataset(tmp.path / "gt", grid, tmp.path / "s", 5, serial);
  build_dataset(tmp.path / "gt", grid, tmp.path / "p", 5, parallel);
  const auto s = tree_bytes(tmp.path / "s");
  CHECK(s.size() == 2 * 8 * 5 + 2);
  CHECK(s == tree_bytes(tmp.path / "p"));
  build_dataset(tmp.path / "gt", grid, tmp.path / "other", 6, serial);
  CHECK(s != tree_bytes(tmp.path / "other"));
}

TEST_CASE("dataset build skips unreadable images and fails on unwritable output") {
  TempDir tmp;
  fs::create_directories(tmp.path / "gt");
  save_image(testing::city_scene(64, 4), tmp.path / "gt" / "good.png");
  std::ofstream(tmp.path / "gt" / "broken.png") << "junk";
  save_image(Image(32, 32), tmp.path / "gt" / "small.png");
  DatasetOptions o;
  o.crop_size = 64;
  o.base.num_frames = 2;
  const auto m = build_dataset(tmp.path / "gt", SweepGrid::parse("L=1;a=1;b=14"), tmp.path / "out", 1, o);
  CHECK(m.entries.size() == 1);
  CHECK(m.warnings.size() >= 2);

  std::ofstream(tmp.path / "file") << "x";
  CHECK_THROWS_AS(build_dataset(tmp.path / "gt", SweepGrid::parse("L=1;a=1;b=14"),
                                tmp.path / "file" / "out", 1, o),
                  IoError);
  fs::create_directories(tmp.path / "empty");
  CHECK_THROWS_AS(build_dataset(tmp.path / "empty", SweepGrid{}, tmp.path / "out2", 1, o), InvalidArgument);
}
