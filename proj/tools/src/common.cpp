#include "common.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "rq/error.hpp"
#include "rq/parallel.hpp"
#include "rq/png_io.hpp"

namespace rqtool {

void ConfigFlags::bind(CLI::App& app, const std::string& flag, const std::string& key,
                       const std::string& help) {
  options_[key] = app.add_option(flag, values_[key], help);
}

void ConfigFlags::bind_bank(CLI::App& app) {
  bind(app, "--gamma", "gamma", "B-spline order gamma (> 1)");
  bind(app, "--riesz-order", "riesz_order", "Riesz order L (L + 1 channels per scale)");
  bind(app, "--scales", "scales", "number of wavelet scales I");
  bind(app, "--alias-radius", "alias_radius", "lattice radius of the autocorrelation sum");
}

void add_config_option(CLI::App& app, ConfigFlags& flags) {
  app.add_option("--config", flags.config_path, "key = value configuration file")
      ->check(CLI::ExistingFile);
}

rq::RunConfig ConfigFlags::resolve() const {
  rq::RunConfig cfg = config_path.empty() ? rq::RunConfig{} : rq::load_run_config(config_path);
  for (const auto& [key, opt] : options_)
    if (opt->count() > 0) cfg.set(key, values_.at(key));
  cfg.validate();
  return cfg;
}

rq::KernelConfig bank_config(const rq::RunConfig& cfg) {
  rq::KernelConfig k;
  k.gamma = cfg.gamma;
  k.riesz_order = cfg.riesz_order;
  k.scales = cfg.scales;
  k.alias_radius = cfg.alias_radius;
  k.validate();
  return k;
}

rq::ProxKind prox_kind(const rq::RunConfig& cfg) { return rq::parse_prox(cfg.prox); }

rq::MultiBandImage load_image(const fs::path& path) {
  const std::string ext = path.extension().string();
  if (ext == ".png") return rq::read_png(path);
  rq::require(ext == ".rqt", rq::ErrorCode::Io, "unsupported image file " + path.string());
  return rq::tensor_to_image(rq::load_tensor(path));
}

std::vector<fs::path> list_inputs(const fs::path& dir) {
  rq::require(fs::is_directory(dir), rq::ErrorCode::Io, dir.string() + " is not a directory");
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string ext = e.path().extension().string();
    if (e.is_regular_file() && (ext == ".rqt" || ext == ".png")) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  rq::require(!out.empty(), rq::ErrorCode::Io, "no .rqt or .png files in " + dir.string());
  return out;
}

std::vector<rq::MultiBandImage> load_images(const fs::path& dir) {
  std::vector<rq::MultiBandImage> out;
  for (const auto& p : list_inputs(dir)) out.push_back(load_image(p));
  return out;
}

std::vector<fs::path> write_image(const fs::path& dir, const std::string& stem,
                                  const rq::MultiBandImage& img, bool png) {
  std::vector<fs::path> out{dir / (stem + ".rqt")};
  rq::save_tensor(out[0], rq::to_tensor(img));
  if (png) {
    const auto pngs = rq::write_png_bands(dir, stem, img, true);
    out.insert(out.end(), pngs.begin(), pngs.end());
  }
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  rq::require(static_cast<bool>(out), rq::ErrorCode::Io, "cannot write " + path.string());
  out << text;
}

void write_manifest(const fs::path& dir, const Manifest& m) {
  json cfg = json::object();
  std::istringstream lines(m.config.to_text());
  std::string line;
  while (std::getline(lines, line)) {
    const auto eq = line.find(" = ");
    if (eq != std::string::npos) cfg[line.substr(0, eq)] = line.substr(eq + 3);
  }
  json outputs = json::array();
  for (const auto& p : m.outputs) outputs.push_back(p.filename().string());
  json doc = {{"tool", "rqtool"},
              {"version", version()},
              {"command", m.command},
              {"seed", m.config.seed},
              {"deterministic", rq::deterministic_mode()},
              {"config", cfg},
              {"outputs", outputs}};
  for (const auto& [k, v] : m.extra.items()) doc[k] = v;
  write_text(dir / "manifest.json", doc.dump(2) + "\n");
}

const char* version() { return RQTOOL_VERSION; }

ModelFiles model_files(const fs::path& checkpoint) {
  fs::path desc = checkpoint;
  desc.replace_extension(".json");
  return {checkpoint, desc};
}

}  // namespace rqtool
