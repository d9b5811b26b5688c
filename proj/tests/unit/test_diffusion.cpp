#include <gtest/gtest.h>

#include <memory>

#include "expect_error.hpp"
#include "oracles.hpp"
#include "rq/diffusion.hpp"
#include "rq/metrics.hpp"
#include "rq/noise.hpp"

namespace {

std::shared_ptr<const rq::FilterBank> bank_for(std::size_t n, int scales = 3, int order = 3) {
  rq::KernelConfig c;
  c.scales = scales;
  c.riesz_order = order;
  return std::make_shared<const rq::FilterBank>(rq::build_filterbank(c, n, n));
}

TEST(KMap, IdentitySmootherFixesTheData) {
  const rq::MultiBandImage f = oracle::random_multiband(2, 8, 8, 1);
  const rq::IdentitySmoother id;
  rq::IterState s = rq::initial_state(f);
  for (int t = 0; t < 3; ++t) s = rq::k_map(f, s, 0.3, id);
  EXPECT_EQ(s.u, f);
  EXPECT_EQ(s.lambda.max_abs(), 0.0);
  EXPECT_EQ(s.tau, 3);
}

TEST(KMap, ZeroDataStaysZero) {
  const rq::MultiBandImage f(1, 16, 16);
  const rq::RqSmoother smoother(bank_for(16, 1, 0), rq::ProxKind::SoftThreshold);
  const rq::IterState s = rq::k_map(f, rq::initial_state(f), 0.1, smoother);
  EXPECT_EQ(s.u.max_abs(), 0.0);
  EXPECT_EQ(s.lambda.max_abs(), 0.0);
}

TEST(KMap, OneAugmentedLagrangianStep) {
  const auto bank = bank_for(16, 1, 1);
  const rq::RqSmoother smoother(bank, rq::ProxKind::SoftThreshold);
  const rq::MultiBandImage f = oracle::random_multiband(1, 16, 16, 2);
  rq::IterState s = rq::initial_state(f);
  s.lambda = oracle::random_multiband(1, 16, 16, 3, -0.1, 0.1);
  const rq::IterState next = rq::k_map(f, s, 0.05, smoother);
  const rq::MultiBandImage u = smoother.shrink(f + s.lambda, 0.05);
  EXPECT_EQ(next.u, u);
  EXPECT_LT((next.lambda - (s.lambda + f - u)).max_abs(), 1e-15);
}

TEST(KMap, RejectsShapeMismatch) {
  const rq::IdentitySmoother id;
  const rq::MultiBandImage f(1, 8, 8);
  EXPECT_RQ_ERROR(rq::k_map(f, rq::initial_state(rq::MultiBandImage(2, 8, 8)), 0.1, id),
                  rq::ErrorCode::DimensionMismatch);
}

TEST(Scheme2, SingleStepIsOneShrink) {
  const rq::RqSmoother smoother(bank_for(16, 2, 1), rq::ProxKind::SoftThreshold);
  const rq::MultiBandImage f = oracle::random_multiband(2, 16, 16, 4);
  EXPECT_EQ(rq::scheme2_denoise(f, 1, 0.07, smoother), smoother.shrink(f, 0.07));
}

TEST(Scheme2, ConvergesWithinTenIterations) {
  // At mu = 0.01. Larger mu slows the multiplier feedback: by step 10 the
  // change is about 2e-3 at mu = 0.02 and 7e-3 at mu = 0.05.
  const rq::RqSmoother smoother(bank_for(64), rq::ProxKind::SoftThreshold);
  for (std::uint64_t seed : {1, 2, 3}) {
    const rq::MultiBandImage noisy = rq::add_gaussian_noise(oracle::blocks(64, 3, seed), 0.04, seed + 50);
    std::vector<double> rel;
    rq::scheme2_denoise(noisy, 10, 0.01, smoother, &rel);
    ASSERT_EQ(rel.size(), 10u);
    EXPECT_LT(rel.back(), 1e-3) << "seed " << seed;
  }
}

TEST(Scheme2, SmallMuNeverCostsMoreThanATenthOfADecibel) {
  const rq::RqSmoother smoother(bank_for(64), rq::ProxKind::SoftThreshold);
  const rq::MultiBandImage clean = oracle::blocks(64, 3, 8);
  const rq::MultiBandImage noisy = rq::add_gaussian_noise(clean, 0.04, 9);
  for (double mu : {1e-3, 5e-3})
    EXPECT_GE(rq::psnr(clean, rq::scheme2_denoise(noisy, 10, mu, smoother)), rq::psnr(clean, noisy) - 0.1);
}

TEST(Diffuse, ExactInverseForAnySmoother) {
  const rq::MultiBandImage f = oracle::random_multiband(2, 16, 16, 10);
  const rq::RqSmoother smoother(bank_for(16, 2, 1), rq::ProxKind::HardThreshold);
  for (int N : {2, 5, 12}) {
    const rq::DiffusionRecord rec = rq::diffuse(f, N, 0.05, 0.7, smoother);
    ASSERT_EQ(rec.iterations(), N);
    rq::MultiBandImage sum = rec.residual_term();
    for (const auto& phi : rec.bands) sum.axpy(rec.beta, phi);
    EXPECT_LT((sum - f).max_abs(), 1e-12);
    EXPECT_LT((rq::spectral_filter(rec, {rq::FilterKind::Allpass, 0, 0}) - f).max_abs(), 1e-12);
  }
}

TEST(Diffuse, BandsAndSpectrumFollowTheirDefinitions) {
  const rq::RqSmoother smoother(bank_for(16, 1, 1), rq::ProxKind::SoftThreshold);
  const rq::DiffusionRecord rec = rq::diffuse(oracle::random_multiband(1, 16, 16, 11), 4, 0.1, 2.0, smoother);
  ASSERT_EQ(rec.states.size(), 6u);
  for (int t = 1; t <= 4; ++t) {
    const auto k = static_cast<std::size_t>(t);
    rq::MultiBandImage expected = rec.states[k + 1] - 2.0 * rec.states[k] + rec.states[k - 1];
    expected *= t / 2.0;
    EXPECT_LT((rec.bands[k - 1] - expected).max_abs(), 1e-12);
    EXPECT_DOUBLE_EQ(rec.spectrum[k - 1], rec.bands[k - 1].l1_norm());
  }
  for (int t = 1; t <= 5; ++t)
    EXPECT_EQ(rec.states[static_cast<std::size_t>(t)], smoother.shrink(rec.states[static_cast<std::size_t>(t) - 1], 0.1));
}

TEST(Diffuse, ConstantImageHasEmptySpectrum) {
  const rq::RqSmoother smoother(bank_for(16, 2, 2), rq::ProxKind::SoftThreshold);
  const rq::MultiBandImage c(3, 16, 16, 0.42);
  ASSERT_LT((smoother.shrink(c, 0.2) - c).max_abs(), 1e-12);
  const rq::DiffusionRecord rec = rq::diffuse(c, 6, 0.2, 1.0, smoother);
  for (double s : rec.spectrum) EXPECT_LT(s, 1e-9);
}

TEST(Diffuse, RejectsBadArguments) {
  const rq::IdentitySmoother id;
  const rq::MultiBandImage f(1, 4, 4);
  EXPECT_RQ_ERROR(rq::diffuse(f, 1, 0.1, 1.0, id), rq::ErrorCode::InvalidArgument);
  EXPECT_RQ_ERROR(rq::diffuse(f, 3, 0.1, 0.0, id), rq::ErrorCode::InvalidArgument);
}

TEST(SpectralFilter, CaseTableWithLaterCaseAtEndpoints) {
  const rq::SpectralFilter low{rq::FilterKind::Lowpass, 3, 0};
  const rq::SpectralFilter high{rq::FilterKind::Highpass, 3, 0};
  const rq::SpectralFilter band{rq::FilterKind::Bandpass, 3, 6};
  const rq::SpectralFilter stop{rq::FilterKind::Bandstop, 3, 6};
  for (int t = 0; t <= 10; ++t) {
    EXPECT_EQ(low.response(t) + high.response(t), 1.0);
    EXPECT_EQ(band.response(t) + stop.response(t), 1.0);
  }
  EXPECT_EQ(low.response(3), 1.0);
  EXPECT_EQ(high.response(2), 1.0);
  EXPECT_EQ(band.response(3), 1.0);
  EXPECT_EQ(band.response(6), 0.0);
}

TEST(SpectralFilter, PartitionsReconstruct) {
  const rq::RqSmoother smoother(bank_for(32, 2, 1), rq::ProxKind::SoftThreshold);
  const rq::MultiBandImage f = oracle::blocks(32, 2, 12) + oracle::random_multiband(2, 32, 32, 12, -0.05, 0.05);
  const rq::DiffusionRecord rec = rq::diffuse(f, 8, 0.05, 1.0, smoother);
  EXPECT_LT((rq::spectral_filter(rec, {rq::FilterKind::Lowpass, 0, 0}) - f).max_abs(), 1e-10);
  for (auto [t1, t2] : {std::pair{0, 0}, std::pair{2, 5}, std::pair{3, 8}, std::pair{8, 8}}) {
    const rq::MultiBandImage sum = rq::spectral_filter(rec, {rq::FilterKind::Highpass, t1, t1}) +
                                   rq::spectral_filter(rec, {rq::FilterKind::Bandpass, t1, t2}) +
                                   rq::spectral_filter(rec, {rq::FilterKind::Lowpass, t2, t2});
    EXPECT_LT((sum - f).max_abs(), 1e-10) << t1 << "," << t2;
    const rq::MultiBandImage pair = rq::spectral_filter(rec, {rq::FilterKind::Bandpass, t1, t2}) +
                                    rq::spectral_filter(rec, {rq::FilterKind::Bandstop, t1, t2});
    EXPECT_LT((pair - f).max_abs(), 1e-10);
  }
}

TEST(SpectralFilter, LowpassKeepsMostEnergyAtFigureParameters) {
  const rq::RqSmoother smoother(bank_for(64), rq::ProxKind::SoftThreshold);
  const rq::MultiBandImage f = oracle::blocks(64, 3, 13) + oracle::random_multiband(3, 64, 64, 13, -0.03, 0.03);
  const rq::DiffusionRecord rec = rq::diffuse(f, 30, 0.4, 1.0, smoother);
  const double e = f.sum_squares();
  EXPECT_GE(rq::spectral_filter(rec, {rq::FilterKind::Lowpass, 3, 0}).sum_squares(), 0.9 * e);
  EXPECT_LE(rq::spectral_filter(rec, {rq::FilterKind::Highpass, 3, 0}).sum_squares(), 0.1 * e);
}

TEST(SpectralFilter, SpectrumDecays) {
  const rq::RqSmoother smoother(bank_for(32), rq::ProxKind::SoftThreshold);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const rq::DiffusionRecord rec = rq::diffuse(oracle::blocks(32, 1, 30 + seed), 10, 0.05, 1.0, smoother);
    EXPECT_LT(rec.spectrum.back(), rec.spectrum.front()) << "seed " << seed;
  }
}

TEST(SpectralFilter, RejectsThresholdsOutsideRange) {
  const rq::IdentitySmoother id;
  const rq::DiffusionRecord rec = rq::diffuse(rq::MultiBandImage(1, 4, 4), 4, 0.1, 1.0, id);
  EXPECT_RQ_ERROR(rq::spectral_filter(rec, {rq::FilterKind::Lowpass, 5, 0}), rq::ErrorCode::BadThresholds);
  EXPECT_RQ_ERROR(rq::spectral_filter(rec, {rq::FilterKind::Bandpass, 3, 2}), rq::ErrorCode::BadThresholds);
  EXPECT_RQ_ERROR(rq::spectral_filter(rec, {rq::FilterKind::Highpass, -1, 0}), rq::ErrorCode::BadThresholds);
}

TEST(SpectralFilter, ParseKinds) {
  EXPECT_EQ(rq::parse_filter_kind("low"), rq::FilterKind::Lowpass);
  EXPECT_EQ(rq::parse_filter_kind("bandstop"), rq::FilterKind::Bandstop);
  EXPECT_THROW(rq::parse_filter_kind("notch"), rq::Error);
}

TEST(PickThresholds, LargestJumps) {
  // S^1..S^5 = 10, 9, 2, 1.5, 1.4: the jumps S^2 -> S^3 and S^1 -> S^2 win.
  const std::vector<int> t = rq::pick_thresholds({10.0, 9.0, 2.0, 1.5, 1.4}, 2);
  EXPECT_EQ(t, (std::vector<int>{2, 3}));
}

}  // namespace
