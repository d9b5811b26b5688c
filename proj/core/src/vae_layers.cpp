#include "rq/vae_layers.hpp"

#include <cmath>

#include "rq/error.hpp"

namespace rq {

double glorot_limit(std::size_t fan_in, std::size_t fan_out) {
  return std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
}

ConvLayer::ConvLayer(std::size_t out, std::size_t in, std::size_t k)
    : kernels(out, in, k, k, k / 2, k / 2), bias(out, 0.0) {}

void ConvLayer::init(std::mt19937_64& rng) {
  const std::size_t area = kernels.d1 * kernels.d2;
  const double lim = glorot_limit(in_channels() * area, out_channels() * area);
  std::uniform_real_distribution<double> u(-lim, lim);
  for (double& w : kernels.weights) w = u(rng);
  std::fill(bias.begin(), bias.end(), 0.0);
}

MultiBandImage ConvLayer::forward(const MultiBandImage& x) const {
  MultiBandImage y = conv_iso(x, kernels);
  for (std::size_t q = 0; q < y.band_count(); ++q)
    if (bias[q] != 0.0)
      for (double& v : y[q].values()) v += bias[q];
  return y;
}

MultiBandImage ConvLayer::backward(const MultiBandImage& x, const MultiBandImage& gy,
                                   ConvLayer& grad) const {
  const KernelFamily gk = conv_iso_kernel_grad(x, gy, kernels);
  for (std::size_t k = 0; k < gk.weights.size(); ++k) grad.kernels.weights[k] += gk.weights[k];
  for (std::size_t q = 0; q < gy.band_count(); ++q)
    for (double v : gy[q].values()) grad.bias[q] += v;
  return conv_iso_adjoint(gy, kernels);
}

void relu_inplace(MultiBandImage& x) {
  for (std::size_t p = 0; p < x.band_count(); ++p)
    for (double& v : x[p].values()) v = v > 0.0 ? v : 0.0;
}

MultiBandImage relu_backward(const MultiBandImage& y, MultiBandImage gy) {
  for (std::size_t p = 0; p < y.band_count(); ++p)
    for (std::size_t k = 0; k < y[p].size(); ++k)
      if (!(y[p][k] > 0.0)) gy[p][k] = 0.0;
  return gy;
}

MultiBandImage mean_pool(const MultiBandImage& x) {
  require(x.rows() % 2 == 0 && x.cols() % 2 == 0, ErrorCode::BadShape,
          "pooling needs even dimensions");
  MultiBandImage y(x.band_count(), x.rows() / 2, x.cols() / 2);
  for (std::size_t p = 0; p < x.band_count(); ++p)
    for (std::size_t r = 0; r < y.rows(); ++r)
      for (std::size_t c = 0; c < y.cols(); ++c)
        y[p](r, c) = 0.25 * (x[p](2 * r, 2 * c) + x[p](2 * r, 2 * c + 1) + x[p](2 * r + 1, 2 * c) +
                             x[p](2 * r + 1, 2 * c + 1));
  return y;
}

MultiBandImage mean_pool_backward(const MultiBandImage& gy) {
  MultiBandImage gx = unpool(gy);
  gx *= 0.25;
  return gx;
}

MultiBandImage unpool(const MultiBandImage& x) {
  MultiBandImage y(x.band_count(), 2 * x.rows(), 2 * x.cols());
  for (std::size_t p = 0; p < x.band_count(); ++p)
    for (std::size_t r = 0; r < y.rows(); ++r)
      for (std::size_t c = 0; c < y.cols(); ++c) y[p](r, c) = x[p](r / 2, c / 2);
  return y;
}

MultiBandImage unpool_backward(const MultiBandImage& gy) {
  MultiBandImage gx = mean_pool(gy);
  gx *= 4.0;
  return gx;
}

MultiBandImage concat_bands(const MultiBandImage& a, const MultiBandImage& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorCode::BadShape,
          "concatenated planes must share their size");
  std::vector<Image2D> bands = a.bands();
  bands.insert(bands.end(), b.bands().begin(), b.bands().end());
  return MultiBandImage(std::move(bands));
}

std::pair<MultiBandImage, MultiBandImage> split_bands(const MultiBandImage& x, std::size_t first) {
  require(first > 0 && first < x.band_count(), ErrorCode::BadShape, "bad band split");
  std::vector<Image2D> a(x.bands().begin(), x.bands().begin() + static_cast<std::ptrdiff_t>(first));
  std::vector<Image2D> b(x.bands().begin() + static_cast<std::ptrdiff_t>(first), x.bands().end());
  return {MultiBandImage(std::move(a)), MultiBandImage(std::move(b))};
}

BatchNorm::BatchNorm(std::size_t channels)
    : scale(channels, 1.0), shift(channels, 0.0), running_mean(channels, 0.0),
      running_var(channels, 1.0) {}

Batch BatchNorm::forward_train(const Batch& x, Cache& cache) const {
  require(!x.empty() && x[0].band_count() == channels(), ErrorCode::BandCountMismatch,
          "batchnorm channel count mismatch");
  const std::size_t C = channels();
  cache.count = x.size() * x[0].rows() * x[0].cols();
  const double n = static_cast<double>(cache.count);
  cache.mean.assign(C, 0.0);
  cache.var.assign(C, 0.0);
  for (const auto& s : x)
    for (std::size_t q = 0; q < C; ++q)
      for (double v : s[q].values()) cache.mean[q] += v;
  for (double& m : cache.mean) m /= n;
  for (const auto& s : x)
    for (std::size_t q = 0; q < C; ++q)
      for (double v : s[q].values()) cache.var[q] += (v - cache.mean[q]) * (v - cache.mean[q]);
  for (double& v : cache.var) v /= n;
  cache.xhat = x;
  Batch y = x;
  for (std::size_t s = 0; s < x.size(); ++s)
    for (std::size_t q = 0; q < C; ++q) {
      const double inv = 1.0 / std::sqrt(cache.var[q] + eps);
      auto xh = cache.xhat[s][q].values();
      auto out = y[s][q].values();
      for (std::size_t k = 0; k < xh.size(); ++k) {
        xh[k] = (xh[k] - cache.mean[q]) * inv;
        out[k] = scale[q] * xh[k] + shift[q];
      }
    }
  return y;
}

MultiBandImage BatchNorm::forward_eval(const MultiBandImage& x) const {
  require(x.band_count() == channels(), ErrorCode::BandCountMismatch,
          "batchnorm channel count mismatch");
  MultiBandImage y = x;
  for (std::size_t q = 0; q < channels(); ++q) {
    const double a = scale[q] / std::sqrt(running_var[q] + eps);
    const double b = shift[q] - a * running_mean[q];
    for (double& v : y[q].values()) v = a * v + b;
  }
  return y;
}

Batch BatchNorm::backward(const Cache& cache, const Batch& gy, BatchNorm& grad) const {
  const std::size_t C = channels();
  const double n = static_cast<double>(cache.count);
  std::vector<double> sum_g(C, 0.0), sum_gx(C, 0.0);
  for (std::size_t s = 0; s < gy.size(); ++s)
    for (std::size_t q = 0; q < C; ++q) {
      auto g = gy[s][q].values();
      auto xh = cache.xhat[s][q].values();
      for (std::size_t k = 0; k < g.size(); ++k) {
        sum_g[q] += g[k];
        sum_gx[q] += g[k] * xh[k];
      }
    }
  for (std::size_t q = 0; q < C; ++q) {
    grad.scale[q] += sum_gx[q];
    grad.shift[q] += sum_g[q];
  }
  // dx = scale / sqrt(var + eps) * (g - mean(g) - xhat mean(g xhat))
  Batch gx = gy;
  for (std::size_t s = 0; s < gy.size(); ++s)
    for (std::size_t q = 0; q < C; ++q) {
      const double a = scale[q] / std::sqrt(cache.var[q] + eps);
      const double mg = sum_g[q] / n, mgx = sum_gx[q] / n;
      auto out = gx[s][q].values();
      auto xh = cache.xhat[s][q].values();
      for (std::size_t k = 0; k < out.size(); ++k) out[k] = a * (out[k] - mg - xh[k] * mgx);
    }
  return gx;
}

void BatchNorm::update_running(const Cache& cache) {
  const double n = static_cast<double>(cache.count);
  const double unbias = n > 1.0 ? n / (n - 1.0) : 1.0;
  for (std::size_t q = 0; q < channels(); ++q) {
    running_mean[q] = (1.0 - momentum) * running_mean[q] + momentum * cache.mean[q];
    running_var[q] = (1.0 - momentum) * running_var[q] + momentum * unbias * cache.var[q];
  }
}

Affine::Affine(std::size_t out, std::size_t in)
    : weight(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(in))),
      bias(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(out))) {}

void Affine::init(std::mt19937_64& rng) {
  const double lim = glorot_limit(static_cast<std::size_t>(weight.cols()),
                                  static_cast<std::size_t>(weight.rows()));
  std::uniform_real_distribution<double> u(-lim, lim);
  for (Eigen::Index j = 0; j < weight.cols(); ++j)
    for (Eigen::Index i = 0; i < weight.rows(); ++i) weight(i, j) = u(rng);
  bias.setZero();
}

Eigen::VectorXd Affine::backward(const Eigen::VectorXd& x, const Eigen::VectorXd& gy,
                                 Affine& grad) const {
  grad.weight.noalias() += gy * x.transpose();
  grad.bias += gy;
  return weight.transpose() * gy;
}

Eigen::VectorXd flatten(const MultiBandImage& x) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(x.size()));
  Eigen::Index k = 0;
  for (const Image2D& band : x.bands())
    for (double e : band.values()) v(k++) = e;
  return v;
}

MultiBandImage unflatten(const Eigen::VectorXd& v, std::size_t bands, std::size_t rows,
                         std::size_t cols) {
  require(static_cast<std::size_t>(v.size()) == bands * rows * cols, ErrorCode::BadShape,
          "vector length does not match the plane shape");
  MultiBandImage x(bands, rows, cols);
  Eigen::Index k = 0;
  for (std::size_t p = 0; p < bands; ++p)
    for (double& e : x[p].values()) e = v(k++);
  return x;
}

}  // namespace rq
