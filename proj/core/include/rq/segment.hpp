#pragma once

#include <cstdint>
#include <vector>

#include "rq/metrics.hpp"
#include "rq/vae.hpp"
#include "rq/vae_smooth.hpp"
#include "rq/vae_train.hpp"

namespace rq {

using LabelMap = std::vector<std::uint8_t>;  // row-major class index per pixel

// Rows must be one-hot over `classes` entries; returns the class indices.
// Throws InvalidMask otherwise.
LabelMap labels_from_one_hot(const std::vector<std::vector<double>>& rows, std::size_t classes);

// log softmax(y)_k at one pixel.
double log_softmax(std::span<const double> logits, std::size_t k);

struct SegmentationTerms {
  double total = 0.0;
  double kl = 0.0;
  double nll = 0.0;       // -H, summed over pixels, batch mean
  double accuracy = 0.0;  // argmax agreement over the batch
};

// Batch mean of KL - H / (2 sigma^2 n), where n is the training-set size.
SegmentationTerms segmentation_loss(const VaeModel& model, const Batch& images,
                                    const std::vector<const LabelMap*>& labels,
                                    const std::vector<Eigen::VectorXd>& eps, std::size_t dataset_size,
                                    VaeModel* grad = nullptr, ForwardPass* pass_out = nullptr);

TrainReport segment_train(VaeModel& model, const Batch& images, const std::vector<LabelMap>& labels,
                          const TrainConfig& cfg);

struct SegmentPrediction {
  LabelMap classes;               // majority vote over runs
  std::vector<LabelMap> runs;     // per-run argmax
  AccuracySummary accuracy;       // filled when ground truth is given
  bool std_degenerate = false;    // one run: the std is reported as 0
};

// n_runs inference passes with skip shrinkage at mu and distinct latent
// draws (seed + run index).
SegmentPrediction segment_predict(const VaeModel& model, const SkipBanks& banks,
                                  const MultiBandImage& f, double mu, ProxKind prox, int n_runs,
                                  std::uint64_t seed, const LabelMap* truth = nullptr);

}  // namespace rq
