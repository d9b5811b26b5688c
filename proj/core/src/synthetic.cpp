#include "rq/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "rq/error.hpp"

namespace rq {

namespace {

struct Shape {
  bool disc;
  double r0, c0, a, b;  // centre and half extents (radius in a for discs)
};

Shape random_shape(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double scale = static_cast<double>(std::min(rows, cols));
  Shape s;
  s.disc = u(rng) < 0.5;
  s.r0 = u(rng) * static_cast<double>(rows);
  s.c0 = u(rng) * static_cast<double>(cols);
  s.a = scale * (0.08 + 0.22 * u(rng));
  s.b = scale * (0.08 + 0.22 * u(rng));
  return s;
}

bool inside(const Shape& s, std::size_t r, std::size_t c) {
  const double dr = static_cast<double>(r) - s.r0, dc = static_cast<double>(c) - s.c0;
  if (s.disc) return dr * dr + dc * dc <= s.a * s.a;
  return std::abs(dr) <= s.a && std::abs(dc) <= s.b;
}

void check_dims(std::size_t rows, std::size_t cols, std::size_t bands) {
  require(rows > 0 && cols > 0 && bands > 0, ErrorCode::BadShape, "synthetic shape must be positive");
}

}  // namespace

MultiBandImage piecewise_constant_image(std::size_t rows, std::size_t cols, std::size_t bands,
                                        std::uint64_t seed, int shapes) {
  check_dims(rows, cols, bands);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> level(0.1, 0.9);
  MultiBandImage out(bands, rows, cols);
  for (std::size_t p = 0; p < bands; ++p) {
    const double bg = level(rng);
    for (double& v : out[p].values()) v = bg;
  }
  for (int k = 0; k < shapes; ++k) {
    const Shape s = random_shape(rng, rows, cols);
    std::vector<double> values(bands);
    for (double& v : values) v = level(rng);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c)
        if (inside(s, r, c))
          for (std::size_t p = 0; p < bands; ++p) out[p](r, c) = values[p];
  }
  return out;
}

LabeledImage two_class_image(std::size_t rows, std::size_t cols, std::size_t bands,
                             std::uint64_t seed, double level0, double level1) {
  check_dims(rows, cols, bands);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.03, 0.03);
  std::uniform_int_distribution<int> count(2, 4);
  LabeledImage out{MultiBandImage(bands, rows, cols), std::vector<std::uint8_t>(rows * cols, 0)};
  const int n = count(rng);
  for (int k = 0; k < n; ++k) {
    const Shape s = random_shape(rng, rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c)
        if (inside(s, r, c)) out.mask[r * cols + c] = 1;
  }
  for (std::size_t p = 0; p < bands; ++p) {
    const double shift = jitter(rng);
    for (std::size_t k = 0; k < rows * cols; ++k)
      out.image[p][k] = (out.mask[k] ? level1 : level0) + shift;
  }
  return out;
}

ImageSeries seasonal_series(std::size_t frames, std::size_t rows, std::size_t cols,
                            std::size_t bands, std::uint64_t seed) {
  check_dims(rows, cols, bands);
  require(frames > 0, ErrorCode::BadLength, "series needs at least one frame");
  const MultiBandImage base = piecewise_constant_image(rows, cols, bands, seed, 6);
  std::mt19937_64 rng(seed ^ 0x5eed5eedULL);
  const Shape field = random_shape(rng, rows, cols);
  std::vector<MultiBandImage> out;
  for (std::size_t t = 0; t < frames; ++t) {
    MultiBandImage f = base;
    const double season =
        0.1 * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(frames));
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c)
        if (inside(field, r, c))
          for (std::size_t p = 0; p < bands; ++p) f[p](r, c) += season;
    out.push_back(std::move(f));
  }
  return ImageSeries(std::move(out));
}

}  // namespace rq
