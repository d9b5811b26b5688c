#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "rq/hankel.hpp"
#include "rq/image.hpp"

namespace rq {

using Batch = std::vector<MultiBandImage>;

// Glorot-uniform draw in +-sqrt(6 / (fan_in + fan_out)).
double glorot_limit(std::size_t fan_in, std::size_t fan_out);

// conv_iso with a centred k x k kernel family plus a per-output bias.
struct ConvLayer {
  KernelFamily kernels;
  std::vector<double> bias;

  ConvLayer() = default;
  ConvLayer(std::size_t out, std::size_t in, std::size_t k);

  std::size_t out_channels() const { return kernels.out_channels; }
  std::size_t in_channels() const { return kernels.in_channels; }

  void init(std::mt19937_64& rng);
  MultiBandImage forward(const MultiBandImage& x) const;
  // Adds the parameter gradient into grad and returns dL/dx.
  MultiBandImage backward(const MultiBandImage& x, const MultiBandImage& gy, ConvLayer& grad) const;
};

void relu_inplace(MultiBandImage& x);
// gy masked by y > 0, where y is the ReLU output.
MultiBandImage relu_backward(const MultiBandImage& y, MultiBandImage gy);

// Non-overlapping 2 x 2 mean pooling and nearest-neighbour unpooling;
// pool(unpool(x)) = x.
MultiBandImage mean_pool(const MultiBandImage& x);
MultiBandImage mean_pool_backward(const MultiBandImage& gy);
MultiBandImage unpool(const MultiBandImage& x);
MultiBandImage unpool_backward(const MultiBandImage& gy);

// Bands of a then bands of b.
MultiBandImage concat_bands(const MultiBandImage& a, const MultiBandImage& b);
std::pair<MultiBandImage, MultiBandImage> split_bands(const MultiBandImage& x, std::size_t first);

// Per-channel normalization with learned scale and shift. Training mode uses
// statistics over every sample and pixel of the batch; inference uses the
// running estimates.
struct BatchNorm {
  std::vector<double> scale;
  std::vector<double> shift;
  std::vector<double> running_mean;
  std::vector<double> running_var;
  double momentum = 0.1;
  double eps = 1e-5;

  struct Cache {
    Batch xhat;
    std::vector<double> mean;
    std::vector<double> var;  // biased batch variance
    std::size_t count = 0;    // samples x pixels per channel
  };

  BatchNorm() = default;
  explicit BatchNorm(std::size_t channels);

  std::size_t channels() const { return scale.size(); }
  Batch forward_train(const Batch& x, Cache& cache) const;
  MultiBandImage forward_eval(const MultiBandImage& x) const;
  Batch backward(const Cache& cache, const Batch& gy, BatchNorm& grad) const;
  void update_running(const Cache& cache);
};

struct Affine {
  Eigen::MatrixXd weight;
  Eigen::VectorXd bias;

  Affine() = default;
  Affine(std::size_t out, std::size_t in);

  void init(std::mt19937_64& rng);
  Eigen::VectorXd forward(const Eigen::VectorXd& x) const { return weight * x + bias; }
  Eigen::VectorXd backward(const Eigen::VectorXd& x, const Eigen::VectorXd& gy, Affine& grad) const;
};

// Band-major flattening, matching tensor layout [P, n1, n2].
Eigen::VectorXd flatten(const MultiBandImage& x);
MultiBandImage unflatten(const Eigen::VectorXd& v, std::size_t bands, std::size_t rows,
                         std::size_t cols);

}  // namespace rq
