#include "turbbench/imgcore/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <memory>
#include <mutex>

#include "turbbench/imgcore/errors.hpp"
#include "turbbench/imgcore/image.hpp"
#include "turbbench/imgcore/kernel.hpp"

namespace turbbench {

namespace {

// FFTW planning and plan destruction are not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

template <typename T>
std::unique_ptr<T[], FftwFree> fftw_buffer(std::size_t n) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * n));
  if (p == nullptr) throw std::bad_alloc();
  return std::unique_ptr<T[], FftwFree>(p);
}

class Plan {
 public:
  explicit Plan(fftw_plan plan) : plan_(plan) {
    if (plan_ == nullptr) throw Error("FFTW failed to create a plan");
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
  ~Plan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  void execute() const { fftw_execute(plan_); }

 private:
  fftw_plan plan_;
};

void check_dims(int width, int height) {
  if (width <= 0 || height <= 0) throw InvalidArgument("FFT dimensions must be positive");
}

}  // namespace

Spectrum forward_fft(std::span<const double> data, int width, int height) {
  check_dims(width, height);
  const std::size_t n = static_cast<std::size_t>(width) * height;
  if (data.size() != n) throw DimensionMismatch("forward_fft: data length mismatch");
  Spectrum out{width, height, {}};
  const std::size_t nbins = static_cast<std::size_t>(height) * out.half_width();

  auto in = fftw_buffer<double>(n);
  auto spec = fftw_buffer<fftw_complex>(nbins);
  std::unique_ptr<Plan> plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = std::make_unique<Plan>(
        fftw_plan_dft_r2c_2d(height, width, in.get(), spec.get(), FFTW_ESTIMATE));
  }
  std::memcpy(in.get(), data.data(), n * sizeof(double));
  plan->execute();
  out.bins.resize(nbins);
  for (std::size_t i = 0; i < nbins; ++i) out.bins[i] = {spec[i][0], spec[i][1]};
  return out;
}

Spectrum forward_fft(const Image& img) {
  return forward_fft(img.pixels(), img.width(), img.height());
}

std::vector<double> inverse_fft(const Spectrum& spectrum) {
  check_dims(spectrum.width, spectrum.height);
  const std::size_t n = static_cast<std::size_t>(spectrum.width) * spectrum.height;
  const std::size_t nbins = static_cast<std::size_t>(spectrum.height) * spectrum.half_width();
  if (spectrum.bins.size() != nbins) throw DimensionMismatch("inverse_fft: bin count mismatch");

  auto spec = fftw_buffer<fftw_complex>(nbins);
  auto out = fftw_buffer<double>(n);
  std::unique_ptr<Plan> plan;
  {
    std::lock_guard lock(planner_mutex());
    // c2r destroys its input, so the plan is made on a private copy.
    plan = std::make_unique<Plan>(fftw_plan_dft_c2r_2d(spectrum.height, spectrum.width,
                                                       spec.get(), out.get(), FFTW_ESTIMATE));
  }
  for (std::size_t i = 0; i < nbins; ++i) {
    spec[i][0] = spectrum.bins[i].real();
    spec[i][1] = spectrum.bins[i].imag();
  }
  plan->execute();
  std::vector<double> result(n);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) result[i] = out[i] * scale;
  return result;
}

Spectrum kernel_otf(const Kernel& k, int width, int height) {
  if (k.size() > width || k.size() > height) {
    throw InvalidArgument("kernel support exceeds image dimensions");
  }
  std::vector<double> padded(static_cast<std::size_t>(width) * height, 0.0);
  const int r = k.radius();
  for (int j = 0; j < k.size(); ++j) {
    const int y = ((j - r) % height + height) % height;
    for (int i = 0; i < k.size(); ++i) {
      const int x = ((i - r) % width + width) % width;
      padded[static_cast<std::size_t>(y) * width + x] += k(i, j);
    }
  }
  return forward_fft(padded, width, height);
}

}  // namespace turbbench
