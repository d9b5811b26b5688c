#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rq/vae_layers.hpp"

namespace rq {

struct VaeShape {
  std::size_t bands = 3;
  std::size_t rows = 32;
  std::size_t cols = 32;
  int levels = 2;               // I
  std::size_t base_channels = 4;  // L
  std::size_t latent_dim = 16;  // d
  std::size_t kernel = 3;
  std::size_t classes = 0;      // K; 0 disables the segmentation head

  void validate() const;
  // C_i = 2^{i-1} L for i >= 1, C_0 = bands.
  std::size_t channels(int i) const;
  // Channels leaving decoder stage i: C_{i-1} for i >= 2 and L for i = 1.
  std::size_t decoder_channels(int i) const;
  std::size_t bottom_rows() const { return rows >> levels; }
  std::size_t bottom_cols() const { return cols >> levels; }
  // 2^{-(I+1)} n1 n2 L
  std::size_t bottom_size() const;
};

// Encoder stage i: conv, ReLU, conv, ReLU, batchnorm (the skip c^(i)), then
// 2 x 2 mean pooling. Decoder stage i: unpool and batchnorm the lowpass,
// concatenate after the skip, conv, ReLU, conv, ReLU. Vectors are indexed by
// scale - 1.
struct VaeModel {
  VaeShape shape;
  double sigma = 0.1;

  std::vector<ConvLayer> enc_first, enc_second;
  std::vector<BatchNorm> enc_norm;
  Affine to_mean, to_log_variance, from_latent;
  std::vector<BatchNorm> dec_norm;
  std::vector<ConvLayer> dec_first, dec_second;
  ConvLayer head;      // L -> bands, followed by ReLU
  ConvLayer seg_head;  // bands -> classes when classes > 0

  // Same shapes, all parameters and running statistics zero.
  VaeModel zeros_like() const;
  std::size_t parameter_count() const;
};

VaeModel make_vae(const VaeShape& shape, std::uint64_t seed, double sigma = 0.1);

// Visits every trainable parameter block in a fixed order. Running
// statistics are visited only by for_each_state.
void for_each_parameter(VaeModel& model,
                        const std::function<void(const std::string&, std::span<double>)>& fn);
void for_each_parameter(const VaeModel& model,
                        const std::function<void(const std::string&, std::span<const double>)>& fn);
void for_each_state(VaeModel& model,
                    const std::function<void(const std::string&, std::span<double>)>& fn);

// Low-level pass over a batch, keeping what the backward pass needs.
enum class NormMode { Batch, Running };

struct EncoderStage {
  Batch input, h1, h2, skip;
  BatchNorm::Cache norm;
};

struct DecoderStage {
  Batch up, joined, g1, g2;
  BatchNorm::Cache norm;
};

struct ForwardPass {
  NormMode mode = NormMode::Batch;
  std::vector<EncoderStage> enc;
  Batch bottom;
  std::vector<Eigen::VectorXd> flat, mean, log_variance, eps, z;
  Batch top;
  std::vector<DecoderStage> dec;
  Batch output;  // after the head ReLU
  Batch logits;  // segmentation head, when requested
};

// Fills enc, bottom, flat, mean and log_variance.
void encode_pass(const VaeModel& model, const Batch& f, NormMode mode, ForwardPass& pass);
// z = mean + exp(log_variance / 2) * eps, then the decoder and head. The
// skips in pass.enc may be edited between the two calls.
void decode_pass(const VaeModel& model, const std::vector<Eigen::VectorXd>& eps, ForwardPass& pass,
                 bool with_logits = false);

// Gradients flowing into the pass outputs. Exactly one of d_output or
// d_logits is used (d_logits when non-empty). Batch mode only.
struct PassGradient {
  Batch d_output;
  Batch d_logits;
  std::vector<Eigen::VectorXd> d_mean, d_log_variance;
};
void backward_pass(const VaeModel& model, const ForwardPass& pass, const PassGradient& g,
                   VaeModel& grad);

// Inference-mode encoder and decoder for one image.
struct Encoding {
  std::vector<MultiBandImage> skips;
  Eigen::VectorXd mean;
  Eigen::VectorXd log_variance;
};

struct LatentSample {
  Eigen::VectorXd z;
  Eigen::VectorXd mean;
  Eigen::VectorXd log_variance;
  std::uint64_t epsilon_seed = 0;
};

Encoding encode(const VaeModel& model, const MultiBandImage& f);
Eigen::VectorXd standard_normal(std::size_t d, std::uint64_t seed);
LatentSample reparameterize(const Eigen::VectorXd& mean, const Eigen::VectorXd& log_variance,
                            std::uint64_t seed);
MultiBandImage decode(const VaeModel& model, const std::vector<MultiBandImage>& skips,
                      const Eigen::VectorXd& z);

// 1/2 (|mean|^2 - d + sum(s - log s)) with s = exp(log_variance).
double kl_divergence(const Eigen::VectorXd& mean, const Eigen::VectorXd& log_variance);

struct ElboTerms {
  double total = 0.0;
  double recon = 0.0;  // batch mean of |f - D|^2 / (2 sigma^2)
  double kl = 0.0;     // batch mean
  double mse = 0.0;    // per pixel, over the batch
};

// Single-sample estimate with the supplied eps (one vector per image),
// batch-mode normalization. When grad is given it receives the gradient of
// total (it must be zeros_like(model) or an accumulator of that shape).
ElboTerms elbo_loss(const VaeModel& model, const Batch& f, const std::vector<Eigen::VectorXd>& eps,
                    VaeModel* grad = nullptr, ForwardPass* pass_out = nullptr);

// Folds the batch statistics of a batch-mode pass into the running estimates.
void update_running_stats(VaeModel& model, const ForwardPass& pass);

}  // namespace rq
