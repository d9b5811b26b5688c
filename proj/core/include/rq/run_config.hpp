#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace rq {

// Flat run configuration shared by the CLI and its manifests. The text form
// is `key = value` per line with `#` comments.
struct RunConfig {
  std::uint64_t seed = 1;
  // filter bank
  double gamma = 1.2;
  int riesz_order = 1;
  int scales = 2;
  int alias_radius = 3;
  // shrinkage and diffusion
  std::string prox = "soft";
  double mu = 0.01;
  int iters = 10;
  double beta = 1.0;
  std::string filter = "low";
  int tau1 = 3;
  int tau2 = 10;
  int scheme = 1;
  // time series
  double mu_spatial = 0.03;
  double mu_time = 0.03;
  int time_scales = 1;
  std::string order = "spatial-first";
  // model
  int levels = 2;
  int channels = 4;
  int latent_dim = 16;
  int kernel = 3;
  int epochs = 50;
  int batch = 4;
  double learning_rate = 1e-3;
  double sigma = 0.1;
  int runs = 50;

  // Throws Config for unknown keys or values outside their domain.
  void set(const std::string& key, const std::string& value);
  void validate() const;
  std::string to_text() const;

  static std::vector<std::string> keys();
};

RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace rq
