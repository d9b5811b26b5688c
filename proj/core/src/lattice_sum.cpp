#include "rq/lattice_sum.hpp"

#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numbers>

#include "rq/error.hpp"

namespace rq {

namespace {

constexpr double kPi = std::numbers::pi;

double fold_unit(double x) { return x - std::round(x); }

// z^{-a} * lower_gamma(a, z), finite as z -> 0 where it tends to 1/a.
double scaled_lower_gamma(double a, double z) {
  if (z > 4.0) return boost::math::tgamma_lower(a, z) * std::pow(z, -a);
  double term = 1.0, sum = 1.0 / a;
  for (int n = 1; n < 200; ++n) {
    term *= -z / n;
    const double add = term / (a + n);
    sum += add;
    if (std::abs(add) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace

double upper_incomplete_gamma(double b, double z) {
  if (b > 0.0) return boost::math::tgamma(b, z);
  if (b == 0.0) return boost::math::expint(1, z);
  // Gamma(b, z) = (Gamma(b + 1, z) - z^b e^{-z}) / b
  return (upper_incomplete_gamma(b + 1.0, z) - std::pow(z, b) * std::exp(-z)) / b;
}

LatticeSum::LatticeSum(double s, int radius) : s_(s), a_(s / 2.0), radius_(radius) {
  require(s > 2.0, ErrorCode::InvalidArgument,
          "lattice sum of |m+x|^-s over Z^2 diverges unless s > 2");
  require(radius >= 0, ErrorCode::InvalidArgument, "radius must be non-negative");
  prefactor_ = std::pow(kPi, a_) / std::tgamma(a_);
  constant_term_ = 1.0 / (a_ - 1.0);
  const int w = 2 * radius_ + 1;
  fourier_coeffs_.assign(static_cast<std::size_t>(w * w), 0.0);
  for (int k1 = -radius_; k1 <= radius_; ++k1) {
    for (int k2 = -radius_; k2 <= radius_; ++k2) {
      if (k1 == 0 && k2 == 0) continue;
      const double z = kPi * (k1 * k1 + k2 * k2);
      fourier_coeffs_[static_cast<std::size_t>((k1 + radius_) * w + (k2 + radius_))] =
          std::pow(z, a_ - 1.0) * upper_incomplete_gamma(1.0 - a_, z);
    }
  }
}

double LatticeSum::excluding_origin(double x1, double x2) const {
  x1 = fold_unit(x1);
  x2 = fold_unit(x2);
  double real_space = 0.0;
  for (int m1 = -radius_; m1 <= radius_; ++m1) {
    for (int m2 = -radius_; m2 <= radius_; ++m2) {
      if (m1 == 0 && m2 == 0) continue;
      const double d1 = m1 + x1, d2 = m2 + x2;
      const double z = kPi * (d1 * d1 + d2 * d2);
      real_space += std::pow(z, -a_) * boost::math::tgamma(a_, z);
    }
  }
  const int w = 2 * radius_ + 1;
  double fourier = 0.0;
  for (int k1 = -radius_; k1 <= radius_; ++k1) {
    for (int k2 = -radius_; k2 <= radius_; ++k2) {
      if (k1 == 0 && k2 == 0) continue;
      fourier += fourier_coeffs_[static_cast<std::size_t>((k1 + radius_) * w + (k2 + radius_))] *
                 std::cos(2.0 * kPi * (k1 * x1 + k2 * x2));
    }
  }
  // The m = 0 term's lower part lives inside the Fourier sum; remove it.
  const double origin_lower = scaled_lower_gamma(a_, kPi * (x1 * x1 + x2 * x2));
  return prefactor_ * (real_space + constant_term_ + fourier - origin_lower);
}

}  // namespace rq
