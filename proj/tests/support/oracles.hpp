#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the library's numerical code; the routines are direct sums and plain
// loops so that they can be trusted by inspection.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "rq/image.hpp"

namespace oracle {

using Complex = std::complex<double>;

inline rq::Image2D random_image(std::size_t rows, std::size_t cols, std::uint64_t seed,
                                double lo = -1.0, double hi = 1.0) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  rq::Image2D img(rows, cols);
  for (double& v : img.values()) v = dist(gen);
  return img;
}

inline rq::MultiBandImage random_multiband(std::size_t bands, std::size_t rows, std::size_t cols,
                                           std::uint64_t seed, double lo = 0.0, double hi = 1.0) {
  std::vector<rq::Image2D> out;
  for (std::size_t p = 0; p < bands; ++p) out.push_back(random_image(rows, cols, seed * 131 + p, lo, hi));
  return rq::MultiBandImage(std::move(out));
}

inline Eigen::MatrixXd random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = dist(gen);
  return m;
}

// F[k1, k2] = sum_x f[x] exp(-2 pi j (k1 x1 / n1 + k2 x2 / n2))
inline std::vector<Complex> naive_dft2(const rq::Image2D& f) {
  const std::size_t n1 = f.rows(), n2 = f.cols();
  std::vector<Complex> out(n1 * n2);
  for (std::size_t k1 = 0; k1 < n1; ++k1)
    for (std::size_t k2 = 0; k2 < n2; ++k2) {
      Complex acc = 0.0;
      for (std::size_t x1 = 0; x1 < n1; ++x1)
        for (std::size_t x2 = 0; x2 < n2; ++x2) {
          const double phase = -2.0 * std::numbers::pi *
                               (static_cast<double>(k1 * x1) / n1 + static_cast<double>(k2 * x2) / n2);
          acc += f(x1, x2) * std::polar(1.0, phase);
        }
      out[k1 * n2 + k2] = acc;
    }
  return out;
}

// out[r1, r2] = sum_{a, b} f[(r1 + a - o1) mod n1, (r2 + b - o2) mod n2] k[a, b]
inline rq::Image2D brute_conv(const rq::Image2D& f, const Eigen::MatrixXd& k, std::size_t o1 = 0,
                              std::size_t o2 = 0) {
  const long n1 = static_cast<long>(f.rows()), n2 = static_cast<long>(f.cols());
  rq::Image2D out(f.rows(), f.cols());
  for (long r1 = 0; r1 < n1; ++r1)
    for (long r2 = 0; r2 < n2; ++r2) {
      double acc = 0.0;
      for (long a = 0; a < k.rows(); ++a)
        for (long b = 0; b < k.cols(); ++b) {
          const long i = ((r1 + a - static_cast<long>(o1)) % n1 + n1) % n1;
          const long j = ((r2 + b - static_cast<long>(o2)) % n2 + n2) % n2;
          acc += f(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) * k(a, b);
        }
      out(static_cast<std::size_t>(r1), static_cast<std::size_t>(r2)) = acc;
    }
  return out;
}

inline double rel_error(const rq::MultiBandImage& a, const rq::MultiBandImage& b) {
  return std::sqrt((a - b).sum_squares() / b.sum_squares());
}

inline double rel_error(const rq::Image2D& a, const rq::Image2D& b) {
  return std::sqrt((a - b).sum_squares() / b.sum_squares());
}

// argmin over a uniform grid of penalty(u) + (u - x)^2 / (2 mu)
template <typename Penalty>
double grid_prox(Penalty penalty, double mu, double x, double lo, double hi, double step) {
  double best_u = lo, best = INFINITY;
  auto visit = [&](double u) {
    const double v = penalty(u) + (u - x) * (u - x) / (2.0 * mu);
    if (v < best) {
      best = v;
      best_u = u;
    }
  };
  const auto count = static_cast<long>(std::floor((hi - lo) / step + 0.5));
  for (long k = 0; k <= count; ++k) visit(lo + static_cast<double>(k) * step);
  // Penalties with a jump at zero need the exact point.
  if (lo <= 0.0 && hi >= 0.0) visit(0.0);
  return best_u;
}

// Piecewise-constant test scene: flat per-band background plus rectangles.
inline rq::MultiBandImage blocks(std::size_t n, std::size_t bands, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  rq::MultiBandImage f(bands, n, n);
  for (std::size_t p = 0; p < bands; ++p) {
    const double base = u(gen);
    for (double& v : f[p].values()) v = base;
  }
  for (int r = 0; r < 6; ++r) {
    const std::size_t a = gen() % n, b = gen() % n, h = n / 8 + gen() % (n / 3), w = n / 8 + gen() % (n / 3);
    for (std::size_t p = 0; p < bands; ++p) {
      const double val = u(gen);
      for (std::size_t i = a; i < std::min(n, a + h); ++i)
        for (std::size_t j = b; j < std::min(n, b + w); ++j) f[p](i, j) = val;
    }
  }
  return f;
}

}  // namespace oracle
