#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rq/image.hpp"
#include "rq/kernels.hpp"
#include "rq/proximal.hpp"
#include "rq/run_config.hpp"
#include "rq/tensor_io.hpp"

namespace rqtool {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

// Flags that map onto RunConfig keys. Values given on the command line
// override the --config file, which overrides the built-in defaults.
class ConfigFlags {
 public:
  void bind(CLI::App& app, const std::string& flag, const std::string& key, const std::string& help);
  void bind_bank(CLI::App& app);
  rq::RunConfig resolve() const;

  std::string config_path;

 private:
  std::map<std::string, std::string> values_;
  std::map<std::string, CLI::Option*> options_;
};

void add_config_option(CLI::App& app, ConfigFlags& flags);

rq::KernelConfig bank_config(const rq::RunConfig& cfg);
rq::ProxKind prox_kind(const rq::RunConfig& cfg);

// .rqt (rank 2 or 3) or .png
rq::MultiBandImage load_image(const fs::path& path);
// Sorted .rqt/.png files of a directory.
std::vector<fs::path> list_inputs(const fs::path& dir);
std::vector<rq::MultiBandImage> load_images(const fs::path& dir);

// Writes <dir>/<stem>.rqt and a PNG rendering; returns both paths.
std::vector<fs::path> write_image(const fs::path& dir, const std::string& stem,
                                  const rq::MultiBandImage& img, bool png = true);

void write_text(const fs::path& path, const std::string& text);

struct Manifest {
  std::string command;
  rq::RunConfig config;
  std::vector<fs::path> outputs;
  json extra = json::object();
};

// manifest.json beside the outputs: config, seed, version and output list.
void write_manifest(const fs::path& dir, const Manifest& m);

const char* version();

// Model description stored beside a checkpoint as <stem>.json.
struct ModelFiles {
  fs::path weights;
  fs::path description;
};
ModelFiles model_files(const fs::path& checkpoint);

// Subcommand registration.
void add_denoise(CLI::App& app);
void add_decompose(CLI::App& app);
void add_timeseries(CLI::App& app);
void add_metrics(CLI::App& app);
void add_bank_inspect(CLI::App& app);
void add_synth(CLI::App& app);
void add_train(CLI::App& app);
void add_segment(CLI::App& app);

}  // namespace rqtool
