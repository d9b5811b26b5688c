#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <vector>

#include "rq/vae.hpp"

namespace rq {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

class Adam {
 public:
  Adam(const VaeModel& model, AdamConfig cfg);
  // model -= step(grad); grad is left untouched.
  void step(VaeModel& model, const VaeModel& grad);
  long steps() const { return t_; }

 private:
  AdamConfig cfg_;
  long t_ = 0;
  std::vector<std::vector<double>> m_, v_;
};

struct TrainConfig {
  int epochs = 50;
  std::size_t batch_size = 4;
  AdamConfig adam;
  std::uint64_t seed = 1;
  bool shuffle = true;
};

struct TrainReport {
  std::vector<double> step_loss;
  std::vector<double> epoch_loss;   // mean step loss per epoch
  std::vector<double> epoch_mse;    // mean batch reconstruction MSE per epoch
};

// One minibatch objective: fills grad (zeroed by the caller) and returns
// (loss, mse). The pass is handed back for the running statistics.
using BatchObjective = std::function<std::pair<double, double>(
    const std::vector<std::size_t>& items, const std::vector<Eigen::VectorXd>& eps, VaeModel& grad,
    ForwardPass& pass)>;

// Minibatch Adam over `count` items with one fresh epsilon per item and step.
// Throws DivergedLoss on a non-finite loss.
TrainReport train_with(VaeModel& model, std::size_t count, const TrainConfig& cfg,
                       const BatchObjective& objective);

// ELBO training. Throws ShapeMismatch for an empty or non-uniform dataset.
TrainReport train(VaeModel& model, const Batch& dataset, const TrainConfig& cfg);

// Inference-mode reconstruction error with z = mean, averaged per pixel.
double reconstruction_mse(const VaeModel& model, const Batch& dataset);

// Checkpoint: every parameter and running statistic as a float32 bundle.
void save_checkpoint(const std::filesystem::path& path, const VaeModel& model);
VaeModel load_checkpoint(const std::filesystem::path& path, const VaeShape& shape, double sigma);

}  // namespace rq
