#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "common.hpp"
#include "rq/error.hpp"
#include "rq/segment.hpp"
#include "rq/vae.hpp"
#include "rq/vae_smooth.hpp"
#include "rq/vae_train.hpp"

namespace rqtool {

std::shared_ptr<const rq::VaeModel> load_model(const fs::path& checkpoint);

namespace {

// A mask is either a single plane of class indices or K one-hot planes.
rq::LabelMap load_mask(const fs::path& path, std::size_t classes) {
  const rq::MultiBandImage m = load_image(path);
  const std::size_t n = m.rows() * m.cols();
  if (m.band_count() == 1) {
    rq::LabelMap out(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double v = m[0][k];
      const double r = std::round(v);
      rq::require(std::abs(v - r) < 1e-6 && r >= 0.0 && r < static_cast<double>(classes),
                  rq::ErrorCode::InvalidMask, path.string() + ": class index out of range");
      out[k] = static_cast<std::uint8_t>(r);
    }
    return out;
  }
  rq::require(m.band_count() == classes, rq::ErrorCode::InvalidMask,
              path.string() + ": one-hot mask needs one plane per class");
  std::vector<std::vector<double>> rows(n, std::vector<double>(classes));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t c = 0; c < classes; ++c) rows[k][c] = m[c][k];
  return rq::labels_from_one_hot(rows, classes);
}

rq::MultiBandImage label_image(const rq::LabelMap& labels, std::size_t rows, std::size_t cols) {
  rq::MultiBandImage out(1, rows, cols);
  for (std::size_t k = 0; k < labels.size(); ++k) out[0][k] = labels[k];
  return out;
}

rq::MultiBandImage plane(const std::vector<double>& v, std::size_t rows, std::size_t cols) {
  return rq::MultiBandImage({rq::Image2D(rows, cols, v)});
}

std::string loss_csv(const rq::TrainReport& r, const char* metric) {
  std::ostringstream os;
  os.precision(17);
  os << "epoch,loss," << metric << "\n";
  for (std::size_t e = 0; e < r.epoch_loss.size(); ++e)
    os << e + 1 << "," << r.epoch_loss[e] << "," << r.epoch_mse[e] << "\n";
  return os.str();
}

}  // namespace

void add_train(CLI::App& app) {
  struct Opts {
    ConfigFlags flags;
    std::string data, masks, output = "model.rqb";
    std::size_t classes = 0;
    int pretrain_epochs = 0;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* cmd = app.add_subcommand("train", "train the autoencoder (ELBO) or the segmentation model");
  cmd->add_option("--data", o->data, "directory of training images")->required();
  cmd->add_option("--masks", o->masks, "directory of masks, same order as --data; enables segmentation");
  cmd->add_option("--classes", o->classes, "number of classes K for segmentation");
  cmd->add_option("--pretrain-epochs", o->pretrain_epochs, "ELBO epochs before segmentation training");
  cmd->add_option("--output", o->output, "checkpoint path; the description goes to <stem>.json");
  add_config_option(*cmd, o->flags);
  o->flags.bind(*cmd, "--levels", "levels", "encoder depth I");
  o->flags.bind(*cmd, "--channels", "channels", "base channel count L");
  o->flags.bind(*cmd, "--latent-dim", "latent_dim", "latent dimension d");
  o->flags.bind(*cmd, "--kernel", "kernel", "convolution kernel size");
  o->flags.bind(*cmd, "--epochs", "epochs", "training epochs");
  o->flags.bind(*cmd, "--batch", "batch", "minibatch size");
  o->flags.bind(*cmd, "--lr", "learning_rate", "Adam learning rate");
  o->flags.bind(*cmd, "--sigma", "sigma", "decoder noise level");
  o->flags.bind(*cmd, "--seed", "seed", "initialisation and sampling seed");
  cmd->callback([o] {
    const rq::RunConfig cfg = o->flags.resolve();
    const bool segmenting = !o->masks.empty();
    rq::require(!segmenting || o->classes >= 2, rq::ErrorCode::Config, "--masks needs --classes >= 2");
    const rq::Batch data = load_images(o->data);
    rq::require(!data.empty(), rq::ErrorCode::Io, "no images in " + o->data);

    rq::VaeShape shape;
    shape.bands = data[0].band_count();
    shape.rows = data[0].rows();
    shape.cols = data[0].cols();
    shape.levels = cfg.levels;
    shape.base_channels = cfg.channels;
    shape.latent_dim = cfg.latent_dim;
    shape.kernel = cfg.kernel;
    shape.classes = segmenting ? o->classes : 0;
    shape.validate();
    rq::VaeModel model = rq::make_vae(shape, cfg.seed, cfg.sigma);

    rq::TrainConfig tc;
    tc.epochs = cfg.epochs;
    tc.batch_size = cfg.batch;
    tc.adam.learning_rate = cfg.learning_rate;
    tc.seed = cfg.seed;

    const fs::path ckpt = o->output;
    const fs::path dir = ckpt.has_parent_path() ? ckpt.parent_path() : fs::path(".");
    fs::create_directories(dir);
    Manifest m{"train", cfg, {}, json::object()};
    rq::TrainReport report;
    if (segmenting) {
      const auto mask_paths = list_inputs(o->masks);
      rq::require(mask_paths.size() == data.size(), rq::ErrorCode::Config,
                  "mask count does not match image count");
      std::vector<rq::LabelMap> labels;
      for (const auto& p : mask_paths) {
        labels.push_back(load_mask(p, o->classes));
        rq::require(labels.back().size() == shape.rows * shape.cols, rq::ErrorCode::ShapeMismatch,
                    p.string() + ": mask size differs from the images");
      }
      if (o->pretrain_epochs > 0) {
        rq::TrainConfig pre = tc;
        pre.epochs = o->pretrain_epochs;
        const rq::TrainReport r = rq::train(model, data, pre);
        write_text(dir / "pretrain_loss.csv", loss_csv(r, "mse"));
        m.outputs.push_back(dir / "pretrain_loss.csv");
      }
      report = rq::segment_train(model, data, labels, tc);
      write_text(dir / "loss.csv", loss_csv(report, "error_rate"));
    } else {
      report = rq::train(model, data, tc);
      write_text(dir / "loss.csv", loss_csv(report, "mse"));
      m.extra["reconstruction_mse"] = rq::reconstruction_mse(model, data);
    }
    m.outputs.push_back(dir / "loss.csv");

    const ModelFiles files = model_files(ckpt);
    rq::save_checkpoint(files.weights, model);
    const json desc = {{"bands", shape.bands},       {"rows", shape.rows},
                       {"cols", shape.cols},         {"levels", shape.levels},
                       {"channels", shape.base_channels}, {"latent_dim", shape.latent_dim},
                       {"kernel", shape.kernel},     {"classes", shape.classes},
                       {"sigma", cfg.sigma}};
    write_text(files.description, desc.dump(2) + "\n");
    m.outputs.push_back(files.weights);
    m.outputs.push_back(files.description);
    m.extra["parameters"] = model.parameter_count();
    if (!report.epoch_loss.empty()) m.extra["final_loss"] = report.epoch_loss.back();
    write_manifest(dir, m);
    std::cout << "parameters " << model.parameter_count() << "\n";
    if (!report.epoch_loss.empty())
      std::cout << "final_loss " << report.epoch_loss.back() << "\nfinal_" << (segmenting ? "error_rate " : "mse ")
                << report.epoch_mse.back() << "\n";
  });
}

void add_segment(CLI::App& app) {
  struct Opts {
    ConfigFlags flags;
    std::string model, input, truth, output;
  };
  auto o = std::make_shared<Opts>();
  CLI::App* cmd = app.add_subcommand("segment", "repeated stochastic segmentation with skip shrinkage");
  cmd->add_option("--model", o->model, "segmentation checkpoint")->required();
  cmd->add_option("--input", o->input, "image to segment")->required();
  cmd->add_option("--truth", o->truth, "ground-truth mask for accuracy statistics");
  cmd->add_option("--output", o->output, "output directory")->required();
  add_config_option(*cmd, o->flags);
  o->flags.bind(*cmd, "--mu,--alpha", "mu", "skip shrinkage parameter");
  o->flags.bind(*cmd, "--runs", "runs", "number of stochastic passes");
  o->flags.bind(*cmd, "--seed", "seed", "latent seed of the first pass");
  o->flags.bind(*cmd, "--prox", "prox", "soft, hard, relu or identity");
  o->flags.bind_bank(*cmd);
  cmd->callback([o] {
    const rq::RunConfig cfg = o->flags.resolve();
    const auto model = load_model(o->model);
    rq::require(model->shape.classes >= 2, rq::ErrorCode::Config, "model has no segmentation head");
    const rq::MultiBandImage f = load_image(o->input);
    rq::LabelMap truth;
    if (!o->truth.empty()) truth = load_mask(o->truth, model->shape.classes);
    const rq::SkipBanks banks(bank_config(cfg));
    const rq::SegmentPrediction pred = rq::segment_predict(
        *model, banks, f, cfg.mu, prox_kind(cfg), cfg.runs, cfg.seed, truth.empty() ? nullptr : &truth);

    const fs::path out = o->output;
    fs::create_directories(out);
    Manifest m{"segment", cfg, {}, json::object()};
    const std::size_t rows = f.rows(), cols = f.cols();
    // Class indices scaled so that the PNG spans [0, 1].
    rq::MultiBandImage classes = label_image(pred.classes, rows, cols);
    rq::save_tensor(out / "classes.rqt", rq::to_tensor(classes));
    classes *= 1.0 / static_cast<double>(model->shape.classes - 1);
    for (const auto& p : write_image(out, "classes_view", classes)) m.outputs.push_back(p);
    m.outputs.push_back(out / "classes.rqt");
    if (!truth.empty()) {
      for (const auto& p : write_image(out, "pixel_rate", plane(pred.accuracy.pixel_rate, rows, cols)))
        m.outputs.push_back(p);
      for (const auto& p : write_image(out, "pixel_std", plane(pred.accuracy.pixel_std, rows, cols)))
        m.outputs.push_back(p);
      m.extra["mean_rate"] = pred.accuracy.mean_rate;
      m.extra["mean_std"] = pred.accuracy.mean_std;
      m.extra["std_degenerate"] = pred.std_degenerate;
      std::cout << "mean_rate " << pred.accuracy.mean_rate << "\nmean_std " << pred.accuracy.mean_std << "\n";
    }
    write_manifest(out, m);
  });
}

}  // namespace rqtool
