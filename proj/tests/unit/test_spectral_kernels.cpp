#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "expect_error.hpp"
#include "rq/fft.hpp"
#include "rq/kernels.hpp"
#include "rq/lattice_sum.hpp"

namespace {

constexpr double kPi = std::numbers::pi;

rq::KernelConfig config(int scales, int order, double gamma = 1.2) {
  rq::KernelConfig c;
  c.scales = scales;
  c.riesz_order = order;
  c.gamma = gamma;
  return c;
}

TEST(Localization, HandValues) {
  EXPECT_NEAR(rq::localization({0.0, 0.0}), 0.0, 1e-15);
  EXPECT_NEAR(rq::localization({kPi, kPi}), 16.0 / 3.0, 1e-14);
  EXPECT_NEAR(rq::localization({kPi, 0.0}), 4.0, 1e-14);
}

TEST(BsplineHat, DcLimitIsOne) {
  const rq::KernelConfig c = config(1, 0);
  EXPECT_EQ(rq::bspline_hat(c, {0.0, 0.0}), 1.0);
  // Along w = t (1, 1) the ratio tends to 1; the error shrinks like t^2, so
  // Richardson extrapolation of consecutive probes lands on the limit.
  double prev = 0.0;
  for (double t : {1e-3, 1e-4, 1e-5}) {
    const double v = rq::bspline_hat(c, {t, t});
    if (prev != 0.0) EXPECT_NEAR((100.0 * v - prev) / 99.0, 1.0, 1e-9);
    prev = v;
  }
}

TEST(BsplineHat, PositiveOffDcAndHandValueAtGammaTwo) {
  const rq::KernelConfig c = config(1, 0);
  for (std::size_t k1 = 0; k1 < 16; ++k1)
    for (std::size_t k2 = 0; k2 < 16; ++k2) {
      if (k1 == 0 && k2 == 0) continue;
      EXPECT_GT(rq::bspline_hat(c, {rq::bin_frequency(k1, 16), rq::bin_frequency(k2, 16)}), 0.0);
    }
  EXPECT_NEAR(rq::bspline_hat(2.0, 1e-8, {kPi, 0.0}), 4.0 / (kPi * kPi), 1e-14);
}

TEST(RieszHat, OrderZeroAndHandValue) {
  EXPECT_NEAR(std::abs(rq::riesz_hat(0, 0, {0.3, -1.1}) - 1.0), 0.0, 1e-15);
  EXPECT_LT(std::abs(rq::riesz_hat(1, 1, {1.0, 0.0}) - std::complex<double>(0.0, -1.0)), 1e-15);
  EXPECT_EQ(rq::riesz_hat(1, 2, {0.0, 0.0}), std::complex<double>(0.0, 0.0));
}

TEST(RieszHat, ChannelEnergySumsToOne) {
  for (int order = 0; order <= 5; ++order)
    for (std::size_t k1 = 0; k1 < 12; ++k1)
      for (std::size_t k2 = 0; k2 < 12; ++k2) {
        if (k1 == 0 && k2 == 0) continue;
        const rq::Freq w{rq::bin_frequency(k1, 12), rq::bin_frequency(k2, 12)};
        double sum = 0.0;
        for (int l = 0; l <= order; ++l) sum += std::norm(rq::riesz_hat(l, order, w));
        EXPECT_NEAR(sum, 1.0, 1e-14);
      }
}

TEST(Dyadic, EvenPowersScaleByTwoAndDeterminantsDouble) {
  const rq::Freq w{0.4, -0.9};
  const rq::Freq w2 = rq::apply_dyadic(2, w);
  EXPECT_DOUBLE_EQ(w2[0], 0.8);
  EXPECT_DOUBLE_EQ(w2[1], -1.8);
  for (int i = 0; i <= 6; ++i) {
    const auto d = rq::dyadic_power(i);
    EXPECT_EQ(std::abs(d[0] * d[3] - d[1] * d[2]), 1 << i) << "i = " << i;
  }
}

// Brute-force sum over a disc of radius R plus the continuum tail
// 2 pi R^{2-s} / (s - 2).
double disc_lattice_sum(double s, double x1, double x2, int R) {
  double sum = 0.0;
  for (int m1 = -R - 1; m1 <= R + 1; ++m1)
    for (int m2 = -R - 1; m2 <= R + 1; ++m2) {
      if (m1 == 0 && m2 == 0) continue;
      const double r = std::hypot(m1 + x1, m2 + x2);
      if (r <= R) sum += std::pow(r, -s);
    }
  return sum + 2.0 * kPi * std::pow(R, 2.0 - s) / (s - 2.0);
}

TEST(LatticeSum, MatchesBruteForceDisc) {
  for (double s : {2.4, 4.0})
    for (auto [x1, x2] : {std::pair{0.0, 0.0}, std::pair{0.3, -0.1}, std::pair{0.5, 0.5}}) {
      const rq::LatticeSum lattice(s, 3);
      const double ref = disc_lattice_sum(s, x1, x2, 600);
      EXPECT_NEAR(lattice.excluding_origin(x1, x2), ref, (s < 3 ? 2e-4 : 1e-7) * ref)
          << "s = " << s << " x = (" << x1 << "," << x2 << ")";
    }
}

TEST(LatticeSum, RejectsDivergentExponent) {
  EXPECT_RQ_ERROR(rq::LatticeSum(2.0, 3), rq::ErrorCode::InvalidArgument);
}

TEST(KernelConfig, GammaAtMostOneRejectedForExactSum) {
  EXPECT_RQ_ERROR(config(1, 0, 1.0).validate(), rq::ErrorCode::InvalidArgument);
  rq::KernelConfig c = config(1, 0, 0.8);
  c.alias_method = rq::AliasSum::Direct;
  EXPECT_NO_THROW(c.validate());
}

TEST(Autocorrelation, DcAtLeastOneAndEvenSymmetric) {
  const rq::KernelConfig c = config(1, 0);
  const rq::Spectrum2D a = rq::autocorrelation_hat(c, 16, 16);
  EXPECT_GE(a(0, 0).real(), 1.0);
  for (std::size_t r = 0; r < 16; ++r)
    for (std::size_t k = 0; k < 16; ++k) {
      EXPECT_NEAR(a(r, k).real(), a((16 - r) % 16, (16 - k) % 16).real(), 1e-14);
      EXPECT_EQ(a(r, k).imag(), 0.0);
    }
}

double max_abs_diff(const rq::Spectrum2D& a, const rq::Spectrum2D& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

TEST(Autocorrelation, RadiusSweepConverges) {
  // The lattice sum is converged by radius 2; the plain truncated alias sum
  // approaches it monotonically as M grows.
  rq::KernelConfig c = config(1, 0);
  c.alias_radius = 2;
  const rq::Spectrum2D r2 = rq::autocorrelation_hat(c, 16, 16);
  c.alias_radius = 4;
  const rq::Spectrum2D r4 = rq::autocorrelation_hat(c, 16, 16);
  EXPECT_LT(max_abs_diff(r2, r4), 1e-6);

  double prev = INFINITY;
  for (int M = 1; M <= 6; ++M) {
    rq::KernelConfig d = c;
    d.alias_method = rq::AliasSum::Direct;
    d.alias_radius = M;
    const double gap = max_abs_diff(rq::autocorrelation_hat(d, 16, 16), r4);
    EXPECT_LT(gap, prev) << "M = " << M;
    prev = gap;
  }
}

TEST(QuincunxFilters, DcValueAndTwoScaleIdentity) {
  const rq::KernelConfig c = config(1, 0);
  const rq::QuincunxFilters q = rq::quincunx_filters(c, 16, 16);
  EXPECT_NEAR(q.refinement(0, 0).real(), std::sqrt(2.0), 1e-15);
  EXPECT_LT(rq::two_scale_residual(q), 1e-8);
}

TEST(QuincunxFilters, HighpassIsModulatedRefinement) {
  const rq::SplineFunctions fns(config(1, 0));
  for (std::size_t k1 = 0; k1 < 16; ++k1)
    for (std::size_t k2 = 0; k2 < 16; ++k2) {
      const rq::Freq w{rq::bin_frequency(k1, 16), rq::bin_frequency(k2, 16)};
      const rq::Freq shifted{-(w[0] + kPi), -(w[1] + kPi)};
      const std::complex<double> expected = -std::polar(1.0, -w[0]) * fns.refinement(shifted) *
                                            fns.autocorrelation({w[0] + kPi, w[1] + kPi});
      EXPECT_LT(std::abs(fns.highpass(w) - expected), 1e-12);
    }
}

TEST(FilterBank, UnityExactOnSmallGrid) {
  const rq::FilterBank bank = rq::build_filterbank(config(1, 0), 16, 16);
  EXPECT_LT(rq::unity_residual(bank), 1e-12);
  EXPECT_EQ(bank.scale_count(), 2u);
  EXPECT_EQ(bank.channel_count(), 1u);
}

TEST(FilterBank, UnityOnDefaultConfiguration) {
  const rq::FilterBank bank = rq::build_filterbank(config(3, 3), 64, 64);
  EXPECT_LT(rq::unity_residual(bank), 1e-9);
  EXPECT_EQ(bank.unity_residual, rq::unity_residual(bank));
}

TEST(FilterBank, FiltersHaveRealImpulseResponses) {
  const rq::FilterBank bank = rq::build_filterbank(config(2, 2), 16, 16);
  auto check = [](const rq::Spectrum2D& s) {
    const rq::Spectrum2D h = rq::idft2_complex(s);
    double imag = 0.0;
    for (std::size_t k = 0; k < h.size(); ++k) imag = std::max(imag, std::abs(h[k].imag()));
    EXPECT_LT(imag, 1e-9);
  };
  check(bank.scaling_primal);
  check(bank.scaling_dual);
  for (std::size_t i = 0; i < bank.scale_count(); ++i)
    for (std::size_t l = 0; l < bank.channel_count(); ++l) {
      check(bank.wavelet_primal[i][l]);
      check(bank.wavelet_dual[i][l]);
    }
}

TEST(FilterBank, WaveletsVanishAtDcAboveScaleZero) {
  const rq::FilterBank bank = rq::build_filterbank(config(2, 1), 16, 16);
  for (std::size_t i = 1; i < bank.scale_count(); ++i)
    for (std::size_t l = 0; l < bank.channel_count(); ++l) {
      EXPECT_LT(std::abs(bank.wavelet_dual[i][l](0, 0)), 1e-10);
      EXPECT_LT(std::abs(bank.wavelet_primal[i][l](0, 0)), 1e-10);
    }
}

TEST(FilterBank, FingerprintTracksConfigAndGrid) {
  const rq::KernelConfig a = config(2, 1);
  EXPECT_EQ(rq::bank_fingerprint(a, 16, 16), rq::bank_fingerprint(a, 16, 16));
  EXPECT_NE(rq::bank_fingerprint(a, 16, 16), rq::bank_fingerprint(a, 16, 32));
  EXPECT_NE(rq::bank_fingerprint(a, 16, 16), rq::bank_fingerprint(config(2, 2), 16, 16));
}

TEST(FilterBank, RejectsTinyGrid) {
  EXPECT_RQ_ERROR(rq::build_filterbank(config(1, 0), 2, 8), rq::ErrorCode::BadShape);
}

}  // namespace
