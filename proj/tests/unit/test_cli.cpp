#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "oracles.hpp"
#include "rq/tensor_io.hpp"
#include "rqtool/cli.hpp"

namespace {

namespace fs = std::filesystem;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("rq_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path save(const std::string& name, const rq::MultiBandImage& f) {
    const fs::path p = dir_ / name;
    rq::save_tensor(p, rq::to_tensor(f));
    return p;
  }

  std::pair<int, std::string> run(const std::vector<std::string>& args) {
    ::testing::internal::CaptureStdout();
    const int code = rqtool::run(args);
    return {code, ::testing::internal::GetCapturedStdout()};
  }

  fs::path dir_;
};

TEST_F(Cli, MetricsOfIdenticalImages) {
  const fs::path a = save("a.rqt", oracle::random_multiband(1, 8, 8, 1));
  const auto [code, out] = run({"metrics", "--ref", a.string(), "--cand", a.string()});
  EXPECT_EQ(code, 0);
  EXPECT_NE(out.find("psnr_max inf"), std::string::npos) << out;
  EXPECT_NE(out.find("ssim 1"), std::string::npos) << out;
}

TEST_F(Cli, DenoiseWithZeroMuReturnsTheInput) {
  const rq::MultiBandImage f = oracle::random_multiband(3, 16, 16, 2);
  const fs::path in = save("in.rqt", f);
  const auto [code, out] = run({"denoise", "--input", in.string(), "--output", (dir_ / "o").string(), "--mu", "0"});
  ASSERT_EQ(code, 0);
  const rq::MultiBandImage u = rq::tensor_to_image(rq::load_tensor(dir_ / "o" / "denoised.rqt"));
  ASSERT_TRUE(u.same_shape(f));
  // The output is stored as float32.
  for (std::size_t b = 0; b < 3; ++b)
    for (std::size_t k = 0; k < 256; ++k) EXPECT_NEAR(u[b][k], f[b][k], 1e-6);
}

TEST_F(Cli, DecomposeWritesBandsSpectrumAndManifest) {
  const fs::path in = save("in.rqt", oracle::blocks(32, 3, 3));
  const fs::path o = dir_ / "o";
  const auto [code, out] = run({"decompose", "--input", in.string(), "--output", o.string(), "--iters", "30",
                                "--mu", "0.4", "--filter", "low", "--tau1", "3"});
  ASSERT_EQ(code, 0);
  for (const char* name : {"highpass", "bandpass", "lowpass", "filtered"}) {
    EXPECT_TRUE(fs::exists(o / (std::string(name) + ".rqt"))) << name;
    EXPECT_TRUE(fs::exists(o / (std::string(name) + ".png"))) << name;
  }
  std::ifstream csv(o / "spectrum.csv");
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header, "tau,S_tau");
  int rows = 0;
  for (std::string line; std::getline(csv, line);) ++rows;
  EXPECT_EQ(rows, 30);

  const nlohmann::json m = nlohmann::json::parse(std::ifstream(o / "manifest.json"));
  EXPECT_EQ(m["command"], "decompose");
  EXPECT_EQ(m["config"]["mu"], "0.4");
  EXPECT_EQ(m["config"]["iters"], "30");
  EXPECT_TRUE(m.contains("seed"));
}

TEST_F(Cli, ConfigFileAndFlagsCombine) {
  const fs::path in = save("in.rqt", oracle::random_multiband(1, 16, 16, 4));
  std::ofstream(dir_ / "run.cfg") << "mu = 0.2\nscheme = 2\niters = 4\n";
  const auto [code, out] = run({"denoise", "--config", (dir_ / "run.cfg").string(), "--input", in.string(),
                                "--output", (dir_ / "o").string(), "--iters", "3"});
  ASSERT_EQ(code, 0);
  const nlohmann::json m = nlohmann::json::parse(std::ifstream(dir_ / "o" / "manifest.json"));
  EXPECT_EQ(m["config"]["mu"], "0.2");
  EXPECT_EQ(m["config"]["iters"], "3");
  std::ifstream csv(dir_ / "o" / "convergence.csv");
  int rows = 0;
  for (std::string line; std::getline(csv, line);) ++rows;
  EXPECT_EQ(rows, 4);
}

TEST_F(Cli, ExitCodes) {
  const fs::path in = save("in.rqt", oracle::random_multiband(1, 8, 8, 5));
  EXPECT_EQ(run({"metrics", "--ref", (dir_ / "missing.rqt").string(), "--cand", in.string()}).first, 3);
  EXPECT_EQ(run({"denoise", "--input", in.string(), "--output", (dir_ / "o").string(), "--mu", "-1"}).first, 2);
  EXPECT_EQ(run({"nonsense"}).first, 1);
  EXPECT_EQ(run({"metrics", "--ref", in.string()}).first, 1);
  EXPECT_EQ(run({"--help"}).first, 0);
}

TEST_F(Cli, SynthWritesImagesAndMasks) {
  const fs::path o = dir_ / "s";
  ASSERT_EQ(run({"synth", "--kind", "two-class", "--output", o.string(), "--count", "2", "--rows", "16", "--cols",
                 "16", "--noise", "0.1"})
                .first,
            0);
  const rq::Tensor mask = rq::load_tensor(o / "masks" / "001.rqt");
  ASSERT_EQ(mask.element_count(), 256u);
  for (float v : mask.data) EXPECT_TRUE(v == 0.0f || v == 1.0f);
  EXPECT_TRUE(fs::exists(o / "noisy" / "000.rqt"));
}

}  // namespace
