#pragma once

#include <vector>

namespace rq {

// Sum over m in Z^2 \ {0} of |m + x|^{-s} for s > 2, evaluated by Ewald
// splitting: a real-space sum of upper incomplete gammas plus a Fourier-space
// sum whose coefficients do not depend on x. Both tails decay like
// exp(-pi r^2), so truncating each to |m|_inf <= radius reaches double
// precision by radius 3 once x is folded into [-1/2, 1/2]^2.
class LatticeSum {
 public:
  LatticeSum(double s, int radius);

  double exponent() const noexcept { return s_; }
  int radius() const noexcept { return radius_; }

  // x is folded onto the unit torus internally.
  double excluding_origin(double x1, double x2) const;

 private:
  double s_;
  double a_;
  int radius_;
  double prefactor_;
  double constant_term_;
  std::vector<double> fourier_coeffs_;  // indexed like (2R+1)^2 grid of k
};

// Upper incomplete gamma Gamma(b, z) for any real b and z > 0.
double upper_incomplete_gamma(double b, double z);

}  // namespace rq
