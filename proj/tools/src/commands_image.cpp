#include <cmath>
#include <cstdio>
#include <iostream>
#include <memory>
#include <sstream>

#include "common.hpp"
#include "rq/diffusion.hpp"
#include "rq/error.hpp"
#include "rq/metrics.hpp"
#include "rq/noise.hpp"
#include "rq/rq_transform.hpp"
#include "rq/synthetic.hpp"
#include "rq/timeseries.hpp"
#include "rq/vae_smooth.hpp"
#include "rq/vae_train.hpp"

namespace rqtool {

namespace {

std::string format_db(double v) {
  if (std::isinf(v)) return "inf";
  std::ostringstream os;
  os.precision(6);
  os << std::fixed << v;
  return os.str();
}

std::string spectrum_csv(const std::vector<double>& spectrum) {
  std::ostringstream os;
  os.precision(17);
  os << "tau,S_tau\n";
  for (std::size_t t = 0; t < spectrum.size(); ++t) os << t + 1 << "," << spectrum[t] << "\n";
  return os.str();
}

rq::VaeShape read_shape(const json& j) {
  rq::VaeShape s;
  s.bands = j.at("bands");
  s.rows = j.at("rows");
  s.cols = j.at("cols");
  s.levels = j.at("levels");
  s.base_channels = j.at("channels");
  s.latent_dim = j.at("latent_dim");
  s.kernel = j.at("kernel");
  s.classes = j.at("classes");
  return s;
}

}  // namespace

// Shared with commands_model.cpp through a declaration there.
std::shared_ptr<const rq::VaeModel> load_model(const fs::path& checkpoint) {
  const ModelFiles files = model_files(checkpoint);
  std::ifstream in(files.description);
  rq::require(static_cast<bool>(in), rq::ErrorCode::Io,
              "missing model description " + files.description.string());
  json j;
  try {
    in >> j;
    return std::make_shared<const rq::VaeModel>(
        rq::load_checkpoint(files.weights, read_shape(j), j.at("sigma").get<double>()));
  } catch (const json::exception& e) {
    rq::fail(rq::ErrorCode::Io, "bad model description: " + std::string(e.what()));
  }
}

void add_denoise(CLI::App& app) {
  struct Opts {
    ConfigFlags flags;
    std::string input, output, reference, model;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* cmd = app.add_subcommand("denoise", "single-pass (scheme 1) or iterative (scheme 2) shrinkage");
  cmd->add_option("--input", o->input, "noisy image (.rqt or .png)")->required();
  cmd->add_option("--output", o->output, "output directory")->required();
  cmd->add_option("--reference", o->reference, "clean image for PSNR/SSIM reporting");
  cmd->add_option("--model", o->model, "trained checkpoint; smooths through the network instead of the bare bank");
  add_config_option(*cmd, o->flags);
  o->flags.bind(*cmd, "--scheme", "scheme", "1: one shrinkage pass, 2: iterative with multiplier");
  o->flags.bind(*cmd, "--mu,--alpha", "mu", "smoothing parameter");
  o->flags.bind(*cmd, "--iters", "iters", "scheme 2 iterations");
  o->flags.bind(*cmd, "--prox", "prox", "soft, hard, relu or identity");
  o->flags.bind(*cmd, "--seed", "seed", "latent seed for --model");
  o->flags.bind_bank(*cmd);
  cmd->callback([o] {
    const rq::RunConfig cfg = o->flags.resolve();
    const fs::path out = o->output;
    fs::create_directories(out);
    const rq::MultiBandImage f = load_image(o->input);
    std::unique_ptr<rq::Smoother> smoother;
    if (o->model.empty()) {
      auto bank = std::make_shared<const rq::FilterBank>(
          rq::build_filterbank(bank_config(cfg), f.rows(), f.cols()));
      smoother = std::make_unique<rq::RqSmoother>(bank, prox_kind(cfg));
    } else {
      smoother = std::make_unique<rq::VaeSmoother>(
          load_model(o->model), std::make_shared<const rq::SkipBanks>(bank_config(cfg)),
          prox_kind(cfg), cfg.seed);
    }
    Manifest m{"denoise", cfg, {}, json::object()};
    rq::MultiBandImage u;
    if (cfg.scheme == 1) {
      u = smoother->shrink(f, cfg.mu);
    } else {
      std::vector<double> rel;
      u = rq::scheme2_denoise(f, cfg.iters, cfg.mu, *smoother, &rel);
      std::ostringstream csv;
      csv.precision(17);
      csv << "iter,relative_change\n";
      for (std::size_t t = 0; t < rel.size(); ++t) csv << t + 1 << "," << rel[t] << "\n";
      write_text(out / "convergence.csv", csv.str());
      m.outputs.push_back(out / "convergence.csv");
    }
    for (const auto& p : write_image(out, "denoised", u)) m.outputs.push_back(p);
    if (!o->reference.empty()) {
      const rq::MultiBandImage ref = load_image(o->reference);
      const double p_in = rq::psnr(ref, f), p_out = rq::psnr(ref, u);
      const double s_out = rq::ssim(ref, u);
      std::cout << "psnr_input " << format_db(p_in) << "\npsnr_output " << format_db(p_out)
                << "\nssim_output " << s_out << "\n";
      m.extra["psnr_input"] = format_db(p_in);
      m.extra["psnr_output"] = format_db(p_out);
      m.extra["ssim_output"] = s_out;
    }
    write_manifest(out, m);
  });
}

void add_decompose(CLI::App& app) {
  struct Opts {
    ConfigFlags flags;
    std::string input, output;
    bool auto_tau = false;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* cmd = app.add_subcommand("decompose", "diffusion scale space and ideal spectral filtering");
  cmd->add_option("--input", o->input, "image (.rqt or .png)")->required();
  cmd->add_option("--output", o->output, "output directory")->required();
  cmd->add_flag("--auto-tau", o->auto_tau, "pick tau1, tau2 at the two largest spectrum jumps");
  add_config_option(*cmd, o->flags);
  o->flags.bind(*cmd, "--iters", "iters", "number of bands N");
  o->flags.bind(*cmd, "--beta", "beta", "band scaling beta");
  o->flags.bind(*cmd, "--mu,--alpha", "mu", "smoothing parameter");
  o->flags.bind(*cmd, "--filter", "filter", "low, high, band, stop or all");
  o->flags.bind(*cmd, "--tau1", "tau1", "first threshold");
  o->flags.bind(*cmd, "--tau2", "tau2", "second threshold (defaults to N when not set)");
  o->flags.bind(*cmd, "--prox", "prox", "soft, hard, relu or identity");
  o->flags.bind_bank(*cmd);
  cmd->callback([o] {
    rq::RunConfig cfg = o->flags.resolve();
    const fs::path out = o->output;
    fs::create_directories(out);
    const rq::MultiBandImage f = load_image(o->input);
    auto bank = std::make_shared<const rq::FilterBank>(
        rq::build_filterbank(bank_config(cfg), f.rows(), f.cols()));
    const rq::RqSmoother smoother(bank, prox_kind(cfg));
    const rq::DiffusionRecord rec = rq::diffuse(f, cfg.iters, cfg.mu, cfg.beta, smoother);
    int tau1 = cfg.tau1, tau2 = std::max(cfg.tau2, cfg.tau1);
    if (o->auto_tau) {
      const auto picked = rq::pick_thresholds(rec.spectrum, 2);
      rq::require(picked.size() == 2, rq::ErrorCode::BadThresholds, "spectrum too short for --auto-tau");
      tau1 = picked[0];
      tau2 = picked[1];
    }
    tau2 = std::min(tau2, cfg.iters);
    cfg.tau1 = tau1;
    cfg.tau2 = tau2;
    Manifest m{"decompose", cfg, {}, json::object()};
    const rq::SpectralFilter chosen{rq::parse_filter_kind(cfg.filter), tau1, tau2};
    const std::pair<const char*, rq::SpectralFilter> parts[] = {
        {"highpass", {rq::FilterKind::Highpass, tau1, tau1}},
        {"bandpass", {rq::FilterKind::Bandpass, tau1, tau2}},
        {"lowpass", {rq::FilterKind::Lowpass, tau2, tau2}},
        {"filtered", chosen}};
    for (const auto& [name, filt] : parts)
      for (const auto& p : write_image(out, name, rq::spectral_filter(rec, filt))) m.outputs.push_back(p);
    write_text(out / "spectrum.csv", spectrum_csv(rec.spectrum));
    m.outputs.push_back(out / "spectrum.csv");
    m.extra["tau1"] = tau1;
    m.extra["tau2"] = tau2;
    write_manifest(out, m);
    std::cout << "tau1 " << tau1 << "\ntau2 " << tau2 << "\n";
  });
}

void add_timeseries(CLI::App& app) {
  struct Opts {
    ConfigFlags flags;
    std::string frames, input, output;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* cmd = app.add_subcommand("timeseries", "spatial plus Haar-in-time diffusion decomposition");
  auto* frames = cmd->add_option("--frames", o->frames, "directory of frames, sorted by name");
  auto* input = cmd->add_option("--input", o->input, "rank-4 .rqt series [T, P, n1, n2]");
  frames->excludes(input);
  cmd->add_option("--output", o->output, "output directory")->required();
  add_config_option(*cmd, o->flags);
  o->flags.bind(*cmd, "--mu-spatial", "mu_spatial", "spatial smoothing parameter");
  o->flags.bind(*cmd, "--mu-time", "mu_time", "temporal smoothing parameter");
  o->flags.bind(*cmd, "--iters", "iters", "number of bands N");
  o->flags.bind(*cmd, "--beta", "beta", "band scaling beta");
  o->flags.bind(*cmd, "--time-scales", "time_scales", "Haar scales in time");
  o->flags.bind(*cmd, "--order", "order", "spatial-first or temporal-first");
  o->flags.bind(*cmd, "--tau1", "tau1", "first threshold (negative: automatic)");
  o->flags.bind(*cmd, "--tau2", "tau2", "second threshold (negative: automatic)");
  o->flags.bind(*cmd, "--prox", "prox", "soft, hard, relu or identity");
  o->flags.bind_bank(*cmd);
  cmd->callback([o] {
    const rq::RunConfig cfg = o->flags.resolve();
    rq::require(!o->frames.empty() || !o->input.empty(), rq::ErrorCode::Config,
                "one of --frames or --input is required");
    const fs::path out = o->output;
    fs::create_directories(out / "frames");
    const rq::ImageSeries v = o->frames.empty() ? rq::tensor_to_series(rq::load_tensor(o->input))
                                                : rq::ImageSeries(load_images(o->frames));
    auto bank = std::make_shared<const rq::FilterBank>(
        rq::build_filterbank(bank_config(cfg), v.rows(), v.cols()));
    const rq::RqSmoother smoother(bank, prox_kind(cfg));
    rq::SeriesConfig sc;
    sc.iterations = cfg.iters;
    sc.mu_spatial = cfg.mu_spatial;
    sc.mu_time = cfg.mu_time;
    sc.beta = cfg.beta;
    sc.prox = prox_kind(cfg);
    sc.time_scales = cfg.time_scales;
    sc.order = cfg.order == "temporal-first" ? rq::SeriesOrder::TemporalFirst : rq::SeriesOrder::SpatialFirst;
    sc.tau1 = cfg.tau1;
    sc.tau2 = cfg.tau2;
    // Thresholds beyond N fall back to the automatic picker.
    if (cfg.tau2 > cfg.iters) sc.tau1 = sc.tau2 = -1;
    const rq::SeriesDecomposition d = rq::scheme2_series(v, sc, smoother);
    Manifest m{"timeseries", cfg, {}, json::object()};
    const std::pair<const char*, const rq::ImageSeries*> parts[] = {
        {"lowpass", &d.lowpass}, {"bandpass", &d.bandpass}, {"highpass", &d.highpass}};
    for (const auto& [name, series] : parts) {
      const fs::path p = out / (std::string(name) + ".rqt");
      rq::save_tensor(p, rq::to_tensor(*series));
      m.outputs.push_back(p);
      for (std::size_t t = 0; t < series->frame_count(); ++t) {
        char stem[64];
        std::snprintf(stem, sizeof stem, "t%03zu_%s", t, name);
        write_image(out / "frames", stem, (*series)[t]);
      }
    }
    write_text(out / "spectrum.csv", spectrum_csv(d.record.spectrum));
    m.outputs.push_back(out / "spectrum.csv");
    m.extra["tau1"] = d.tau1;
    m.extra["tau2"] = d.tau2;
    write_manifest(out, m);
    std::cout << "frames " << v.frame_count() << "\ntau1 " << d.tau1 << "\ntau2 " << d.tau2 << "\n";
  });
}

void add_metrics(CLI::App& app) {
  struct Opts {
    std::string ref, cand;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* cmd = app.add_subcommand("metrics", "PSNR (max and max^2 peaks) and SSIM");
  cmd->add_option("--ref", o->ref, "reference image")->required();
  cmd->add_option("--cand", o->cand, "candidate image")->required();
  cmd->callback([o] {
    const rq::MultiBandImage ref = load_image(o->ref), cand = load_image(o->cand);
    std::cout << "psnr_max " << format_db(rq::psnr(ref, cand, rq::PsnrPeak::Max)) << "\n"
              << "psnr_max2 " << format_db(rq::psnr(ref, cand, rq::PsnrPeak::MaxSquared)) << "\n"
              << "ssim " << rq::ssim(ref, cand) << "\n";
  });
}

void add_bank_inspect(CLI::App& app) {
  struct Opts {
    ConfigFlags flags;
    std::size_t rows = 64, cols = 64;
    std::string dump;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* cmd = app.add_subcommand("bank-inspect", "build a filter bank and report its diagnostics");
  cmd->add_option("--rows", o->rows, "grid rows");
  cmd->add_option("--cols", o->cols, "grid columns");
  cmd->add_option("--dump", o->dump, "directory for |filter| magnitudes as .rqt");
  add_config_option(*cmd, o->flags);
  o->flags.bind_bank(*cmd);
  cmd->callback([o] {
    const rq::RunConfig cfg = o->flags.resolve();
    const rq::FilterBank bank = rq::build_filterbank(bank_config(cfg), o->rows, o->cols);
    json filters = json::array();
    auto describe = [&](const std::string& name, const rq::Spectrum2D& s) {
      filters.push_back({{"name", name}, {"max_abs", s.max_abs()}, {"energy", s.sum_squares()}});
      if (o->dump.empty()) return;
      fs::create_directories(o->dump);
      rq::Image2D mag(s.rows(), s.cols());
      for (std::size_t k = 0; k < s.size(); ++k) mag[k] = std::abs(s[k]);
      rq::save_tensor(fs::path(o->dump) / (name + ".rqt"), rq::to_tensor(mag));
    };
    describe("scaling_primal", bank.scaling_primal);
    describe("scaling_dual", bank.scaling_dual);
    for (std::size_t i = 0; i < bank.scale_count(); ++i)
      for (std::size_t l = 0; l < bank.channel_count(); ++l) {
        const std::string tag = std::to_string(i) + "_" + std::to_string(l);
        describe("wavelet_primal_" + tag, bank.wavelet_primal[i][l]);
        describe("wavelet_dual_" + tag, bank.wavelet_dual[i][l]);
      }
    char id[32];
    std::snprintf(id, sizeof id, "%016llx", static_cast<unsigned long long>(bank.id));
    const json doc = {{"id", id},
                      {"rows", bank.n1},
                      {"cols", bank.n2},
                      {"scales", bank.config.scales},
                      {"riesz_order", bank.config.riesz_order},
                      {"filter_pairs", 1 + bank.scale_count() * bank.channel_count()},
                      {"unity_residual", bank.unity_residual},
                      {"dc_folded_bins", bank.dc_folded_bins},
                      {"filters", filters}};
    std::cout << doc.dump(2) << "\n";
  });
}

void add_synth(CLI::App& app) {
  struct Opts {
    std::string kind = "piecewise", output;
    std::size_t count = 1, rows = 64, cols = 64, bands = 3, frames = 16;
    double noise = 0.0;
    std::uint64_t seed = 1;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* cmd = app.add_subcommand("synth", "generate synthetic test data");
  cmd->add_option("--kind", o->kind, "piecewise, two-class or series")
      ->check(CLI::IsMember({"piecewise", "two-class", "series"}));
  cmd->add_option("--output", o->output, "output directory")->required();
  cmd->add_option("--count", o->count, "number of images");
  cmd->add_option("--rows", o->rows, "rows");
  cmd->add_option("--cols", o->cols, "columns");
  cmd->add_option("--bands", o->bands, "bands");
  cmd->add_option("--frames", o->frames, "frames for --kind series");
  cmd->add_option("--noise", o->noise, "also write noisy copies with this sigma");
  cmd->add_option("--seed", o->seed, "first seed; image k uses seed + k");
  cmd->callback([o] {
    const fs::path out = o->output;
    fs::create_directories(out);
    for (std::size_t k = 0; k < o->count; ++k) {
      const std::uint64_t seed = o->seed + k;
      char stem[32];
      std::snprintf(stem, sizeof stem, "%03zu", k);
      if (o->kind == "series") {
        const rq::ImageSeries s = rq::seasonal_series(o->frames, o->rows, o->cols, o->bands, seed);
        rq::save_tensor(out / ("series_" + std::string(stem) + ".rqt"), rq::to_tensor(s));
        continue;
      }
      rq::MultiBandImage img;
      if (o->kind == "two-class") {
        const rq::LabeledImage li = rq::two_class_image(o->rows, o->cols, o->bands, seed);
        img = li.image;
        rq::Image2D mask(o->rows, o->cols);
        for (std::size_t l = 0; l < li.mask.size(); ++l) mask[l] = li.mask[l];
        fs::create_directories(out / "masks");
        rq::save_tensor(out / "masks" / (std::string(stem) + ".rqt"), rq::to_tensor(mask));
      } else {
        img = rq::piecewise_constant_image(o->rows, o->cols, o->bands, seed);
      }
      fs::create_directories(out / "images");
      rq::save_tensor(out / "images" / (std::string(stem) + ".rqt"), rq::to_tensor(img));
      if (o->noise > 0.0) {
        fs::create_directories(out / "noisy");
        rq::save_tensor(out / "noisy" / (std::string(stem) + ".rqt"),
                        rq::to_tensor(rq::add_gaussian_noise(img, o->noise, seed ^ 0x9e3779b97f4a7c15ULL)));
      }
    }
  });
}

}  // namespace rqtool
