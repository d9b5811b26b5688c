#include "rq/kernels.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "rq/error.hpp"
#include "rq/parallel.hpp"

namespace rq {

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);

double norm2(Freq w) { return std::hypot(w[0], w[1]); }

double fold(double x) {
  double y = std::fmod(x + kPi, 2.0 * kPi);
  if (y <= 0.0) y += 2.0 * kPi;
  return y - kPi;
}

Freq fold(Freq w) { return {fold(w[0]), fold(w[1])}; }

Freq shift_pi(Freq w) { return {w[0] + kPi, w[1] + kPi}; }

Freq inverse_dyadic(Freq w) { return {(w[0] + w[1]) / 2.0, (w[0] - w[1]) / 2.0}; }

template <typename Fn>
Spectrum2D sample_grid(std::size_t n1, std::size_t n2, Fn fn) {
  Spectrum2D out(n1, n2);
  parallel_for(n1, [&](std::size_t k1) {
    const double w1 = bin_frequency(k1, n1);
    for (std::size_t k2 = 0; k2 < n2; ++k2) out(k1, k2) = fn(Freq{w1, bin_frequency(k2, n2)});
  });
  return out;
}

void check_spline_nondegenerate(const SplineFunctions& fns, std::size_t n1, std::size_t n2) {
  const double eps = fns.config().dc_epsilon;
  for (std::size_t k1 = 0; k1 < n1; ++k1) {
    for (std::size_t k2 = 0; k2 < n2; ++k2) {
      const Freq w{bin_frequency(k1, n1), bin_frequency(k2, n2)};
      if (norm2(w) <= eps) continue;
      require(std::abs(fns.bspline(w)) >= eps, ErrorCode::DegenerateDenominator,
              "B-spline vanishes at bin (" + std::to_string(k1) + "," + std::to_string(k2) + ")");
    }
  }
}

}  // namespace

void KernelConfig::validate() const {
  require(gamma > 0.0, ErrorCode::InvalidArgument, "gamma must be positive");
  require(alias_method != AliasSum::Ewald || gamma > 1.0, ErrorCode::InvalidArgument,
          "gamma must exceed 1 for the exact alias sum to converge");
  require(riesz_order >= 0, ErrorCode::InvalidArgument, "riesz_order must be non-negative");
  require(scales >= 1, ErrorCode::InvalidArgument, "scales must be at least 1");
  require(alias_radius >= 0, ErrorCode::InvalidArgument, "alias_radius must be non-negative");
  require(dc_epsilon > 0.0, ErrorCode::InvalidArgument, "dc_epsilon must be positive");
}

double localization(Freq w) {
  // Written with 1 - cos x = 2 sin^2(x/2) so that V keeps full relative
  // precision near the origin, where it vanishes like |w|^2.
  auto s = [](double x) {
    const double h = std::sin(0.5 * x);
    return h * h;
  };
  return 2.0 / 3.0 * (4.0 * s(w[0]) + 4.0 * s(w[1]) + s(w[0] + w[1]) + s(w[0] - w[1]));
}

double bspline_hat(double gamma, double dc_epsilon, Freq w) {
  const double r = norm2(w);
  if (r <= dc_epsilon) return 1.0;
  return std::pow(localization(w), gamma / 2.0) / std::pow(r, gamma);
}

double bspline_hat(const KernelConfig& cfg, Freq w) {
  return bspline_hat(cfg.gamma, cfg.dc_epsilon, w);
}

std::complex<double> riesz_hat(int l, int order, Freq w) {
  require(order >= 0 && l >= 0 && l <= order, ErrorCode::InvalidArgument,
          "Riesz channel index out of range");
  const double r = norm2(w);
  if (r == 0.0) return {0.0, 0.0};
  // sqrt(L! / (l! (L-l)!)) via lgamma keeps large orders finite.
  const double binom = std::exp(0.5 * (std::lgamma(order + 1.0) - std::lgamma(l + 1.0) -
                                       std::lgamma(order - l + 1.0)));
  const double mag = binom * std::pow(w[0] / r, l) * std::pow(w[1] / r, order - l);
  static const std::complex<double> kPowers[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  return kPowers[order % 4] * mag;
}

std::array<int, 4> dyadic_power(int i) {
  require(i >= 0, ErrorCode::InvalidArgument, "dyadic power must be non-negative");
  const int s = 1 << (i / 2);
  if (i % 2 == 0) return {s, 0, 0, s};
  return {s, s, s, -s};
}

Freq apply_dyadic(int i, Freq w) {
  const auto d = dyadic_power(i);
  return {d[0] * w[0] + d[1] * w[1], d[2] * w[0] + d[3] * w[1]};
}

SplineFunctions::SplineFunctions(const KernelConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  if (cfg_.alias_method == AliasSum::Ewald) lattice_.emplace(2.0 * cfg_.gamma, cfg_.alias_radius);
}

double SplineFunctions::bspline(Freq y) const { return bspline_hat(cfg_, y); }

double SplineFunctions::bspline_dual(Freq y) const { return bspline(y) / autocorrelation(y); }

double SplineFunctions::direct_alias_tail(Freq w) const {
  const int M = cfg_.alias_radius;
  double sum = 0.0;
  for (int m1 = -M; m1 <= M; ++m1) {
    for (int m2 = -M; m2 <= M; ++m2) {
      if (m1 == 0 && m2 == 0) continue;
      const double r = std::hypot(w[0] + 2.0 * kPi * m1, w[1] + 2.0 * kPi * m2);
      sum += std::pow(r, -2.0 * cfg_.gamma);
    }
  }
  return sum;
}

double SplineFunctions::autocorrelation(Freq w) const {
  const Freq wf = fold(w);
  const double origin_term = bspline_hat(2.0 * cfg_.gamma, cfg_.dc_epsilon, wf);
  const double v = std::max(localization(wf), 0.0);
  if (v == 0.0) return origin_term;
  double tail;
  if (lattice_) {
    // sum_{m != 0} |2 pi m + w|^{-2g} = (2 pi)^{-2g} sum_{m != 0} |m + w / 2 pi|^{-2g}
    tail = std::pow(2.0 * kPi, -2.0 * cfg_.gamma) *
           lattice_->excluding_origin(wf[0] / (2.0 * kPi), wf[1] / (2.0 * kPi));
  } else {
    tail = direct_alias_tail(wf);
  }
  return origin_term + std::pow(v, cfg_.gamma) * tail;
}

double SplineFunctions::refinement(Freq w) const {
  // sqrt(2) beta(D w) / beta(w) written through V so the filter is exactly
  // 2 pi periodic: |D w| = sqrt(2) |w| cancels the radial factors.
  const Freq wf = fold(w);
  if (norm2(wf) <= cfg_.dc_epsilon) return kSqrt2;
  const double num = std::max(localization(apply_dyadic(1, wf)), 0.0);
  const double den = localization(wf);
  return kSqrt2 * std::pow(num / (2.0 * den), cfg_.gamma / 2.0);
}

double SplineFunctions::refinement_dual(Freq w) const {
  return refinement(w) * autocorrelation(w) / autocorrelation(apply_dyadic(1, w));
}

std::complex<double> SplineFunctions::highpass(Freq w) const {
  const Freq ws = shift_pi(w);
  const std::complex<double> phase = std::polar(1.0, -w[0]);
  // H is even, so H(-(w + pi)) = H(w + pi).
  return -phase * refinement(ws) * autocorrelation(ws);
}

std::complex<double> SplineFunctions::highpass_dual(Freq w) const {
  const std::complex<double> phase = std::polar(1.0, -w[0]);
  return -phase * refinement(shift_pi(w)) / autocorrelation(apply_dyadic(1, w));
}

std::complex<double> SplineFunctions::wavelet(Freq y) const {
  const Freq x = inverse_dyadic(y);
  return highpass(x) * bspline(x) / kSqrt2;
}

std::complex<double> SplineFunctions::wavelet_dual(Freq y) const {
  const Freq x = inverse_dyadic(y);
  return highpass_dual(x) * bspline_dual(x) / kSqrt2;
}

Spectrum2D autocorrelation_hat(const KernelConfig& cfg, std::size_t n1, std::size_t n2) {
  const SplineFunctions fns(cfg);
  return sample_grid(n1, n2, [&](Freq w) { return Complex(fns.autocorrelation(w)); });
}

QuincunxFilters quincunx_filters(const KernelConfig& cfg, std::size_t n1, std::size_t n2) {
  const SplineFunctions fns(cfg);
  check_spline_nondegenerate(fns, n1, n2);
  QuincunxFilters q;
  q.refinement = sample_grid(n1, n2, [&](Freq w) { return Complex(fns.refinement(w)); });
  q.refinement_dual = sample_grid(n1, n2, [&](Freq w) { return Complex(fns.refinement_dual(w)); });
  q.highpass = sample_grid(n1, n2, [&](Freq w) { return fns.highpass(w); });
  q.highpass_dual = sample_grid(n1, n2, [&](Freq w) { return fns.highpass_dual(w); });
  q.autocorr = sample_grid(n1, n2, [&](Freq w) { return Complex(fns.autocorrelation(w)); });
  q.autocorr_scaled = sample_grid(
      n1, n2, [&](Freq w) { return Complex(fns.autocorrelation(apply_dyadic(1, w))); });
  return q;
}

double two_scale_residual(const QuincunxFilters& q) {
  // Shifting by pi on the grid requires even dimensions; the shifted values
  // are recomputed from the bins (k + n/2) mod n.
  const std::size_t n1 = q.autocorr.rows(), n2 = q.autocorr.cols();
  require(n1 % 2 == 0 && n2 % 2 == 0, ErrorCode::BadShape,
          "two-scale check needs even grid dimensions");
  double worst = 0.0;
  for (std::size_t k1 = 0; k1 < n1; ++k1) {
    for (std::size_t k2 = 0; k2 < n2; ++k2) {
      const std::size_t s1 = (k1 + n1 / 2) % n1, s2 = (k2 + n2 / 2) % n2;
      const double rhs = 0.5 * std::norm(q.refinement(k1, k2)) * q.autocorr(k1, k2).real() +
                         0.5 * std::norm(q.refinement(s1, s2)) * q.autocorr(s1, s2).real();
      worst = std::max(worst, std::abs(q.autocorr_scaled(k1, k2).real() - rhs));
    }
  }
  return worst;
}

}  // namespace rq
