#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "expect_error.hpp"
#include "oracles.hpp"
#include "rq/metrics.hpp"
#include "rq/noise.hpp"
#include "rq/png_io.hpp"
#include "rq/run_config.hpp"
#include "rq/tensor_io.hpp"

namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "rq_metrics_io";
  fs::create_directories(dir);
  return dir / name;
}

TEST(Psnr, TwentyDecibelsForMseOfOnePercent) {
  // Reference max 1; every pixel off by 0.1 gives MSE 0.01.
  rq::MultiBandImage ref(1, 4, 4), cand(1, 4, 4);
  ref[0](0, 0) = 1.0;
  for (std::size_t k = 0; k < 16; ++k) cand[0][k] = ref[0][k] + 0.1;
  EXPECT_NEAR(rq::mse(ref, cand), 0.01, 1e-15);
  EXPECT_NEAR(rq::psnr(ref, cand), 20.0, 1e-12);
  EXPECT_NEAR(rq::psnr(ref, cand, rq::PsnrPeak::MaxSquared), 20.0, 1e-12);
}

TEST(Psnr, InfiniteForIdenticalImages) {
  const rq::MultiBandImage f = oracle::random_multiband(2, 8, 8, 1);
  EXPECT_TRUE(std::isinf(rq::psnr(f, f)));
  EXPECT_GT(rq::psnr(f, f), 0.0);
}

TEST(Psnr, PeakConventionsScaleDifferently) {
  // Scaling both images by c moves the max-peak PSNR by -10 log10 c and the
  // squared-peak PSNR not at all.
  const rq::MultiBandImage f = oracle::random_multiband(1, 16, 16, 2);
  const rq::MultiBandImage g = f + 0.05 * oracle::random_multiband(1, 16, 16, 3);
  const double c = 4.0;
  EXPECT_NEAR(rq::psnr(c * f, c * g) - rq::psnr(f, g), -10.0 * std::log10(c), 1e-10);
  EXPECT_NEAR(rq::psnr(c * f, c * g, rq::PsnrPeak::MaxSquared), rq::psnr(f, g, rq::PsnrPeak::MaxSquared),
              1e-10);
}

TEST(Psnr, ShapeMismatchThrows) {
  EXPECT_RQ_ERROR(rq::psnr(rq::MultiBandImage(1, 4, 4), rq::MultiBandImage(1, 4, 8)),
                  rq::ErrorCode::ShapeMismatch);
}

TEST(Ssim, IdenticalIsOne) {
  const rq::MultiBandImage f = oracle::random_multiband(3, 16, 16, 4);
  EXPECT_NEAR(rq::ssim(f, f), 1.0, 1e-15);
}

TEST(Ssim, DecreasesWithShift) {
  const rq::MultiBandImage f = oracle::random_multiband(1, 16, 16, 5);
  double last = 1.0;
  for (double s : {0.01, 0.05, 0.1}) {
    rq::MultiBandImage g = f;
    for (std::size_t k = 0; k < g[0].size(); ++k) g[0][k] += s;
    const double v = rq::ssim(f, g);
    EXPECT_LT(v, last);
    last = v;
  }
}

TEST(Ssim, MatchesGlobalFormula) {
  const rq::MultiBandImage f = oracle::random_multiband(1, 8, 8, 6);
  const rq::MultiBandImage g = oracle::random_multiband(1, 8, 8, 7);
  const std::size_t n = 64;
  double mf = 0, mg = 0, lo = 1e9, hi = -1e9;
  for (std::size_t k = 0; k < n; ++k) {
    mf += f[0][k] / n;
    mg += g[0][k] / n;
    lo = std::min(lo, f[0][k]);
    hi = std::max(hi, f[0][k]);
  }
  double vf = 0, vg = 0, cov = 0;
  for (std::size_t k = 0; k < n; ++k) {
    vf += (f[0][k] - mf) * (f[0][k] - mf) / n;
    vg += (g[0][k] - mg) * (g[0][k] - mg) / n;
    cov += (f[0][k] - mf) * (g[0][k] - mg) / n;
  }
  const double c1 = std::pow(0.01 * (hi - lo), 2), c2 = std::pow(0.03 * (hi - lo), 2);
  const double expect = (2 * mf * mg + c1) * (2 * cov + c2) / ((mf * mf + mg * mg + c1) * (vf + vg + c2));
  EXPECT_NEAR(rq::ssim(f, g), expect, 1e-6);
}

TEST(Ssim, ConstantEqualMeansIsOne) {
  rq::MultiBandImage f(1, 4, 4);
  for (std::size_t k = 0; k < 16; ++k) f[0][k] = 0.3;
  EXPECT_NEAR(rq::ssim(f, f), 1.0, 1e-15);
}

TEST(Noise, ZeroSigmaIsIdentity) {
  const rq::MultiBandImage f = oracle::random_multiband(2, 8, 8, 8);
  EXPECT_EQ(rq::add_gaussian_noise(f, 0.0, 1), f);
}

TEST(Noise, EmpiricalStdAndPsnr) {
  rq::MultiBandImage f(1, 256, 256);
  for (std::size_t k = 0; k < f[0].size(); ++k) f[0][k] = 0.5;
  f[0](0, 0) = 1.0;
  const rq::MultiBandImage g = rq::add_gaussian_noise(f, 0.04, 2);
  EXPECT_NEAR(std::sqrt(rq::mse(f, g)), 0.04, 0.04 * 0.02);
  // 10 log10(1 / 0.04^2) = 27.96 dB for a unit peak.
  EXPECT_NEAR(rq::psnr(f, g), 27.96, 0.3);
  EXPECT_EQ(g, rq::add_gaussian_noise(f, 0.04, 2));
  EXPECT_NE(g, rq::add_gaussian_noise(f, 0.04, 3));
}

TEST(TensorIo, BitExactRoundtrip) {
  rq::Tensor t;
  t.dims = {2, 3, 4};
  for (std::size_t k = 0; k < 24; ++k) t.data.push_back(static_cast<float>(k) * 0.37f - 3.0f);
  std::stringstream s;
  rq::write_tensor(s, t);
  const std::string bytes = s.str();
  EXPECT_EQ(bytes.substr(0, 4), "RQT1");
  EXPECT_EQ(bytes.size(), 4u + 4u + 12u + 24u * 4u);
  const rq::Tensor back = rq::read_tensor(s);
  EXPECT_EQ(back.dims, t.dims);
  EXPECT_EQ(back.data, t.data);
}

TEST(TensorIo, ImageConversionsAndFiles) {
  const rq::MultiBandImage f = oracle::random_multiband(3, 5, 7, 9);
  const fs::path p = scratch("img.rqt");
  rq::save_tensor(p, rq::to_tensor(f));
  const rq::MultiBandImage back = rq::tensor_to_image(rq::load_tensor(p));
  ASSERT_TRUE(back.same_shape(f));
  for (std::size_t b = 0; b < 3; ++b)
    for (std::size_t k = 0; k < 35; ++k) EXPECT_EQ(back[b][k], static_cast<float>(f[b][k]));
}

TEST(TensorIo, RejectsCorruptFiles) {
  rq::Tensor t;
  t.dims = {2, 2};
  t.data = {1, 2, 3, 4};
  std::stringstream s;
  rq::write_tensor(s, t);
  std::string bytes = s.str();

  const fs::path trailing = scratch("trailing.rqt");
  std::ofstream(trailing, std::ios::binary) << bytes << 'x';
  EXPECT_RQ_ERROR(rq::load_tensor(trailing), rq::ErrorCode::Io);

  const fs::path short_file = scratch("short.rqt");
  std::ofstream(short_file, std::ios::binary) << bytes.substr(0, bytes.size() - 1);
  EXPECT_RQ_ERROR(rq::load_tensor(short_file), rq::ErrorCode::Io);

  bytes[0] = 'X';
  const fs::path magic = scratch("magic.rqt");
  std::ofstream(magic, std::ios::binary) << bytes;
  EXPECT_RQ_ERROR(rq::load_tensor(magic), rq::ErrorCode::Io);

  EXPECT_RQ_ERROR(rq::load_tensor(scratch("missing.rqt")), rq::ErrorCode::Io);
}

TEST(TensorIo, BundleRoundtrip) {
  rq::Tensor a, b;
  a.dims = {3};
  a.data = {1.5f, -2.0f, 0.25f};
  b.dims = {1, 2};
  b.data = {7.0f, 8.0f};
  const fs::path p = scratch("bundle.rqb");
  rq::save_bundle(p, {{"alpha", a}, {"beta.w", b}});
  const rq::TensorBundle back = rq::load_bundle(p);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].first, "alpha");
  EXPECT_EQ(back[0].second.data, a.data);
  EXPECT_EQ(back[1].first, "beta.w");
  EXPECT_EQ(back[1].second.dims, b.dims);
}

TEST(PngIo, SixteenBitRoundtrip) {
  const rq::MultiBandImage f = oracle::random_multiband(1, 9, 11, 10);
  const fs::path p = scratch("gray.png");
  rq::write_png_gray(p, f[0]);
  const rq::MultiBandImage back = rq::read_png(p);
  ASSERT_EQ(back.band_count(), 1u);
  ASSERT_EQ(back.rows(), 9u);
  ASSERT_EQ(back.cols(), 11u);
  for (std::size_t k = 0; k < 99; ++k) EXPECT_LE(std::abs(back[0][k] - f[0][k]), 0.5 / 65535.0 + 1e-12);
}

TEST(PngIo, RgbAndClipping) {
  rq::MultiBandImage f = oracle::random_multiband(3, 4, 4, 11);
  f[0](0, 0) = 1.7;
  f[1](0, 0) = -0.3;
  const fs::path p = scratch("rgb.png");
  rq::write_png_rgb(p, f, 8);
  const rq::MultiBandImage back = rq::read_png(p);
  ASSERT_EQ(back.band_count(), 3u);
  EXPECT_EQ(back[0](0, 0), 1.0);
  EXPECT_EQ(back[1](0, 0), 0.0);
  EXPECT_LE(std::abs(back[2](1, 1) - f[2](1, 1)), 0.5 / 255.0 + 1e-12);
}

TEST(RunConfig, ParsesKeysAndComments) {
  const rq::RunConfig c = rq::parse_run_config("# comment\nmu = 0.25\n\n  iters=7   # trailing\nprox = hard\n");
  EXPECT_EQ(c.mu, 0.25);
  EXPECT_EQ(c.iters, 7);
  EXPECT_EQ(c.prox, "hard");
  EXPECT_EQ(c.scales, rq::RunConfig{}.scales);
}

TEST(RunConfig, TextRoundtrip) {
  rq::RunConfig c;
  c.mu = 0.4;
  c.gamma = 1.7;
  c.filter = "band";
  const rq::RunConfig back = rq::parse_run_config(c.to_text());
  EXPECT_EQ(back.to_text(), c.to_text());
  EXPECT_EQ(back.mu, 0.4);
}

TEST(RunConfig, RejectsUnknownKeysAndBadValues) {
  EXPECT_RQ_ERROR(rq::parse_run_config("colour = red\n"), rq::ErrorCode::Config);
  EXPECT_RQ_ERROR(rq::parse_run_config("iters = many\n"), rq::ErrorCode::Config);
  EXPECT_RQ_ERROR(rq::parse_run_config("mu = -1\n"), rq::ErrorCode::Config);
  EXPECT_RQ_ERROR(rq::parse_run_config("just text\n"), rq::ErrorCode::Config);
}

}  // namespace
