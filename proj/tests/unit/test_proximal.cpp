#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "expect_error.hpp"
#include "oracles.hpp"
#include "rq/proximal.hpp"

namespace {

using rq::ProximalRule;
using rq::ProxKind;

TEST(Prox, SoftThresholdValues) {
  const ProximalRule soft(ProxKind::SoftThreshold, 1.0);
  EXPECT_EQ(soft.apply(3.0), 2.0);
  EXPECT_EQ(soft.apply(0.5), 0.0);
  EXPECT_EQ(soft.apply(-2.0), -1.0);
}

TEST(Prox, ReluValues) {
  const ProximalRule relu(ProxKind::Relu, 0.0);
  EXPECT_EQ(relu.apply(-1.0), 0.0);
  EXPECT_EQ(relu.apply(2.0), 2.0);
}

TEST(Prox, HardThresholdKeepsLargeEntries) {
  const ProximalRule hard(ProxKind::HardThreshold, 1.0);
  EXPECT_EQ(hard.apply(1.5), 1.5);
  EXPECT_EQ(hard.apply(-0.9), 0.0);
  EXPECT_EQ(hard.apply(1.0), 0.0);
}

TEST(Prox, ZeroThresholdIsIdentity) {
  for (ProxKind k : {ProxKind::SoftThreshold, ProxKind::HardThreshold, ProxKind::Identity}) {
    const ProximalRule r(k, 0.0);
    for (double x : {-2.5, -1e-9, 0.0, 3e-7, 4.0}) EXPECT_EQ(r.apply(x), x);
  }
}

TEST(Prox, RejectsNegativeThreshold) {
  EXPECT_RQ_ERROR(ProximalRule(ProxKind::SoftThreshold, -0.1), rq::ErrorCode::InvalidArgument);
}

TEST(Prox, ParseNames) {
  EXPECT_EQ(rq::parse_prox("soft"), ProxKind::SoftThreshold);
  EXPECT_EQ(rq::parse_prox("hard"), ProxKind::HardThreshold);
  EXPECT_EQ(rq::prox_name(ProxKind::Relu), "relu");
  EXPECT_THROW(rq::parse_prox("median"), rq::Error);
}

TEST(Prox, SoftMatchesGridMinimisation) {
  const double step = 1e-3;
  for (double mu : {0.1, 0.5, 1.0})
    for (double x : {-2.0, -0.7, -0.05, 0.0, 0.3, 1.25, 2.9}) {
      const double u = oracle::grid_prox([](double v) { return std::abs(v); }, mu, x, -4.0, 4.0, step);
      EXPECT_NEAR(ProximalRule(ProxKind::SoftThreshold, mu).apply(x), u, step) << "mu " << mu << " x " << x;
    }
}

TEST(Prox, HardMatchesGridMinimisationOfItsPenalty) {
  const double step = 1e-3, mu = 0.8;
  const ProximalRule hard(ProxKind::HardThreshold, mu);
  for (double x : {-2.0, -0.5, 0.3, 0.95, 1.7}) {
    const double u = oracle::grid_prox([&](double v) { return rq::prox_penalty(hard, mu, v); }, mu, x, -4.0, 4.0, step);
    EXPECT_NEAR(hard.apply(x), u, step) << "x " << x;
  }
}

TEST(MoreauGradient, Identities) {
  const ProximalRule soft(ProxKind::SoftThreshold, 0.0);
  EXPECT_DOUBLE_EQ(rq::moreau_gradient(soft, 1.0, 3.0), 1.0);
  for (double x : {-0.9, -0.2, 0.0, 0.4, 1.0}) EXPECT_DOUBLE_EQ(rq::moreau_gradient(soft, 1.0, x), x);
  const ProximalRule id(ProxKind::Identity, 0.0);
  for (double x : {-3.0, 0.1, 8.0}) EXPECT_EQ(rq::moreau_gradient(id, 0.5, x), 0.0);
  EXPECT_RQ_ERROR(rq::moreau_gradient(soft, 0.0, 1.0), rq::ErrorCode::ZeroMu);
}

TEST(MoreauGradient, IsTheEnvelopeDerivative) {
  const ProximalRule soft(ProxKind::SoftThreshold, 0.0);
  const double h = 1e-6;
  for (double mu : {0.3, 1.0})
    for (double x : {-1.7, -0.1, 0.25, 2.2}) {
      const double fd = (rq::moreau_envelope(soft, mu, x + h) - rq::moreau_envelope(soft, mu, x - h)) / (2 * h);
      EXPECT_NEAR(rq::moreau_gradient(soft, mu, x), fd, 1e-6);
    }
}

TEST(MoreauEnvelope, TendsToPenaltyAsMuShrinks) {
  const ProximalRule soft(ProxKind::SoftThreshold, 0.0);
  for (double x : {-1.3, 0.4, 2.0}) {
    double prev_gap = INFINITY;
    for (double mu : {1e-1, 1e-2, 1e-3, 1e-4}) {
      const double gap = std::abs(rq::moreau_envelope(soft, mu, x) - std::abs(x));
      EXPECT_LT(gap, prev_gap);
      prev_gap = gap;
    }
    EXPECT_LT(prev_gap, 1e-4);
  }
}

TEST(Prox, SoftIsFirmlyNonexpansive) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> d(-3.0, 3.0);
  const ProximalRule soft(ProxKind::SoftThreshold, 0.7);
  for (int k = 0; k < 1000; ++k) {
    const double x = d(gen), y = d(gen);
    const double px = soft.apply(x), py = soft.apply(y);
    EXPECT_LE((px - py) * (px - py), (px - py) * (x - y) + 1e-15);
  }
}

TEST(Prox, ImageOverloadAppliesElementwise) {
  rq::Image2D img(2, 2, std::vector<double>{-2.0, -0.5, 0.5, 2.0});
  const rq::Image2D out = rq::prox_apply(ProximalRule(ProxKind::SoftThreshold, 1.0), img);
  EXPECT_EQ(out, rq::Image2D(2, 2, std::vector<double>{-1.0, 0.0, 0.0, 1.0}));
}

}  // namespace
