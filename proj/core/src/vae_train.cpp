#include "rq/vae_train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "rq/error.hpp"
#include "rq/tensor_io.hpp"

namespace rq {

Adam::Adam(const VaeModel& model, AdamConfig cfg) : cfg_(cfg) {
  require(cfg.learning_rate > 0.0, ErrorCode::InvalidArgument, "learning rate must be positive");
  for_each_parameter(model, [&](const std::string&, std::span<const double> v) {
    m_.emplace_back(v.size(), 0.0);
    v_.emplace_back(v.size(), 0.0);
  });
}

void Adam::step(VaeModel& model, const VaeModel& grad) {
  ++t_;
  const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  std::vector<std::span<const double>> g;
  for_each_parameter(grad, [&](const std::string&, std::span<const double> v) { g.push_back(v); });
  std::size_t k = 0;
  for_each_parameter(model, [&](const std::string&, std::span<double> w) {
    auto& m = m_[k];
    auto& v = v_[k];
    const auto& gk = g[k];
    for (std::size_t j = 0; j < w.size(); ++j) {
      m[j] = cfg_.beta1 * m[j] + (1.0 - cfg_.beta1) * gk[j];
      v[j] = cfg_.beta2 * v[j] + (1.0 - cfg_.beta2) * gk[j] * gk[j];
      w[j] -= cfg_.learning_rate * (m[j] / c1) / (std::sqrt(v[j] / c2) + cfg_.eps);
    }
    ++k;
  });
}

TrainReport train_with(VaeModel& model, std::size_t count, const TrainConfig& cfg,
                       const BatchObjective& objective) {
  require(count > 0, ErrorCode::ShapeMismatch, "empty training set");
  require(cfg.batch_size >= 1, ErrorCode::InvalidArgument, "batch size must be positive");
  require(cfg.epochs >= 0, ErrorCode::InvalidArgument, "epochs must be non-negative");
  TrainReport report;
  if (cfg.epochs == 0) return report;
  Adam adam(model, cfg.adam);
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t d = model.shape.latent_dim;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (cfg.shuffle) std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0, mse_sum = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < count; start += cfg.batch_size) {
      const std::size_t stop = std::min(count, start + cfg.batch_size);
      std::vector<std::size_t> items(order.begin() + static_cast<std::ptrdiff_t>(start),
                                     order.begin() + static_cast<std::ptrdiff_t>(stop));
      std::vector<Eigen::VectorXd> eps;
      for (std::size_t s = 0; s < items.size(); ++s) {
        Eigen::VectorXd e(static_cast<Eigen::Index>(d));
        for (Eigen::Index k = 0; k < e.size(); ++k) e(k) = normal(rng);
        eps.push_back(std::move(e));
      }
      VaeModel grad = model.zeros_like();
      ForwardPass pass;
      const auto [loss, mse] = objective(items, eps, grad, pass);
      require(std::isfinite(loss), ErrorCode::DivergedLoss,
              "training loss became non-finite at epoch " + std::to_string(epoch));
      adam.step(model, grad);
      update_running_stats(model, pass);
      report.step_loss.push_back(loss);
      loss_sum += loss;
      mse_sum += mse;
      ++batches;
    }
    report.epoch_loss.push_back(loss_sum / static_cast<double>(batches));
    report.epoch_mse.push_back(mse_sum / static_cast<double>(batches));
  }
  return report;
}

TrainReport train(VaeModel& model, const Batch& dataset, const TrainConfig& cfg) {
  require(!dataset.empty(), ErrorCode::ShapeMismatch, "empty training set");
  for (const auto& f : dataset)
    require(f.same_shape(dataset[0]), ErrorCode::ShapeMismatch, "training images differ in shape");
  return train_with(model, dataset.size(), cfg,
                    [&](const std::vector<std::size_t>& items, const std::vector<Eigen::VectorXd>& eps,
                        VaeModel& grad, ForwardPass& pass) {
                      Batch batch;
                      for (std::size_t k : items) batch.push_back(dataset[k]);
                      const ElboTerms t = elbo_loss(model, batch, eps, &grad, &pass);
                      return std::make_pair(t.total, t.mse);
                    });
}

double reconstruction_mse(const VaeModel& model, const Batch& dataset) {
  require(!dataset.empty(), ErrorCode::ShapeMismatch, "empty dataset");
  double acc = 0.0;
  for (const auto& f : dataset) {
    const Encoding e = encode(model, f);
    const MultiBandImage out = decode(model, e.skips, e.mean);
    acc += (out - f).sum_squares() / static_cast<double>(f.size());
  }
  return acc / static_cast<double>(dataset.size());
}

void save_checkpoint(const std::filesystem::path& path, const VaeModel& model) {
  TensorBundle bundle;
  auto add = [&](const std::string& name, std::span<const double> v) {
    Tensor t{{static_cast<std::uint32_t>(v.size())}, {}};
    for (double x : v) t.data.push_back(static_cast<float>(x));
    bundle.emplace_back(name, std::move(t));
  };
  for_each_parameter(model, add);
  VaeModel copy = model;
  for_each_state(copy, [&](const std::string& name, std::span<double> v) { add(name, v); });
  save_bundle(path, bundle);
}

VaeModel load_checkpoint(const std::filesystem::path& path, const VaeShape& shape, double sigma) {
  VaeModel model = make_vae(shape, 0, sigma);
  const TensorBundle bundle = load_bundle(path);
  std::size_t k = 0;
  auto take = [&](const std::string& name, std::span<double> v) {
    require(k < bundle.size() && bundle[k].first == name, ErrorCode::Io,
            "checkpoint entry " + name + " missing or out of order");
    const Tensor& t = bundle[k].second;
    require(t.data.size() == v.size(), ErrorCode::Io, "checkpoint entry " + name + " has the wrong size");
    std::copy(t.data.begin(), t.data.end(), v.begin());
    ++k;
  };
  for_each_parameter(model, take);
  for_each_state(model, take);
  require(k == bundle.size(), ErrorCode::Io, "checkpoint has unexpected extra entries");
  return model;
}

}  // namespace rq
