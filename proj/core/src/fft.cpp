#include "rq/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "rq/error.hpp"

namespace rq {

namespace {

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n)
      : ptr(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {}
  ~FftwBuffer() { fftw_free(ptr); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* ptr;
};

// The FFTW planner is not thread-safe; execution through fftw_execute_dft on
// fresh aligned buffers is. Plans are made once per (shape, direction) with
// FFTW_ESTIMATE, which keeps results reproducible across runs.
class PlanCache {
 public:
  fftw_plan get(std::size_t rows, std::size_t cols, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_tuple(rows, cols, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    FftwBuffer in(rows * cols), out(rows * cols);
    fftw_plan plan = fftw_plan_dft_2d(static_cast<int>(rows), static_cast<int>(cols), in.ptr,
                                      out.ptr, sign, FFTW_ESTIMATE);
    plans_.emplace(key, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<std::size_t, std::size_t, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

Spectrum2D run(const Complex* input, std::size_t rows, std::size_t cols, int sign) {
  const std::size_t n = rows * cols;
  FftwBuffer in(n), out(n);
  for (std::size_t i = 0; i < n; ++i) {
    in.ptr[i][0] = input[i].real();
    in.ptr[i][1] = input[i].imag();
  }
  fftw_execute_dft(plan_cache().get(rows, cols, sign), in.ptr, out.ptr);
  Spectrum2D result(rows, cols);
  for (std::size_t i = 0; i < n; ++i) result[i] = Complex(out.ptr[i][0], out.ptr[i][1]);
  return result;
}

}  // namespace

Spectrum2D dft2(const Image2D& img) {
  std::vector<Complex> buffer(img.values().begin(), img.values().end());
  return run(buffer.data(), img.rows(), img.cols(), FFTW_FORWARD);
}

Spectrum2D idft2_complex(const Spectrum2D& spec) {
  Spectrum2D out = run(spec.values().data(), spec.rows(), spec.cols(), FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(spec.size());
  for (auto& v : out.values()) v *= scale;
  return out;
}

Image2D idft2(const Spectrum2D& spec) {
  const Spectrum2D full = idft2_complex(spec);
  double max_real = 0.0, max_imag = 0.0;
  std::vector<double> data(full.size());
  for (std::size_t i = 0; i < full.size(); ++i) {
    data[i] = full[i].real();
    max_real = std::max(max_real, std::abs(full[i].real()));
    max_imag = std::max(max_imag, std::abs(full[i].imag()));
  }
  require(max_imag <= 1e-9 * (max_real + 1.0), ErrorCode::NonHermitianSpectrum,
          "imaginary residue " + std::to_string(max_imag) + " after inverse DFT");
  return Image2D(spec.rows(), spec.cols(), std::move(data));
}

}  // namespace rq
