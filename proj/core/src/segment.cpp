#include "rq/segment.hpp"

#include <algorithm>
#include <cmath>

#include "rq/error.hpp"

namespace rq {

LabelMap labels_from_one_hot(const std::vector<std::vector<double>>& rows, std::size_t classes) {
  LabelMap out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    require(row.size() == classes, ErrorCode::InvalidMask, "one-hot row has the wrong length");
    std::size_t ones = 0, hot = 0;
    for (std::size_t k = 0; k < classes; ++k) {
      if (row[k] == 1.0) {
        ++ones;
        hot = k;
      } else {
        require(row[k] == 0.0, ErrorCode::InvalidMask, "one-hot entries must be 0 or 1");
      }
    }
    require(ones == 1, ErrorCode::InvalidMask, "one-hot row must contain exactly one 1");
    out.push_back(static_cast<std::uint8_t>(hot));
  }
  return out;
}

double log_softmax(std::span<const double> logits, std::size_t k) {
  const double top = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double y : logits) sum += std::exp(y - top);
  return logits[k] - top - std::log(sum);
}

SegmentationTerms segmentation_loss(const VaeModel& model, const Batch& images,
                                    const std::vector<const LabelMap*>& labels,
                                    const std::vector<Eigen::VectorXd>& eps, std::size_t dataset_size,
                                    VaeModel* grad, ForwardPass* pass_out) {
  const std::size_t K = model.shape.classes;
  require(K >= 2, ErrorCode::InvalidArgument, "segmentation needs a head with at least two classes");
  require(model.sigma > 0.0, ErrorCode::NonPositiveSigma, "observation sigma must be positive");
  require(labels.size() == images.size() && dataset_size > 0, ErrorCode::InvalidMask,
          "one label map per image is required");
  ForwardPass pass;
  encode_pass(model, images, NormMode::Batch, pass);
  decode_pass(model, eps, pass, true);
  const std::size_t B = images.size();
  const double inv_b = 1.0 / static_cast<double>(B);
  const double w = 1.0 / (2.0 * model.sigma * model.sigma * static_cast<double>(dataset_size));
  SegmentationTerms t;
  PassGradient g;
  std::vector<double> y(K), p(K);
  std::size_t hits = 0, pixels = 0;
  for (std::size_t s = 0; s < B; ++s) {
    const MultiBandImage& logits = pass.logits[s];
    const LabelMap& lab = *labels[s];
    require(lab.size() == logits.rows() * logits.cols(), ErrorCode::InvalidMask,
            "label map does not match the image size");
    MultiBandImage d(K, logits.rows(), logits.cols());
    for (std::size_t l = 0; l < lab.size(); ++l) {
      require(lab[l] < K, ErrorCode::InvalidMask, "label outside the class range");
      for (std::size_t k = 0; k < K; ++k) y[k] = logits[k][l];
      const double lp = log_softmax(y, lab[l]);
      t.nll -= lp;
      const auto best = static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
      hits += best == lab[l];
      ++pixels;
      if (grad) {
        const double top = *std::max_element(y.begin(), y.end());
        double sum = 0.0;
        for (std::size_t k = 0; k < K; ++k) sum += (p[k] = std::exp(y[k] - top));
        for (std::size_t k = 0; k < K; ++k)
          d[k][l] = w * inv_b * (p[k] / sum - (k == lab[l] ? 1.0 : 0.0));
      }
    }
    t.kl += kl_divergence(pass.mean[s], pass.log_variance[s]);
    if (grad) {
      g.d_logits.push_back(std::move(d));
      g.d_mean.push_back(pass.mean[s] * inv_b);
      g.d_log_variance.push_back(0.5 * inv_b * (pass.log_variance[s].array().exp() - 1.0).matrix());
    }
  }
  t.nll *= inv_b;
  t.kl *= inv_b;
  t.total = t.kl + w * t.nll;
  t.accuracy = static_cast<double>(hits) / static_cast<double>(pixels);
  require(std::isfinite(t.total), ErrorCode::DivergedLoss, "non-finite segmentation loss");
  if (grad) backward_pass(model, pass, g, *grad);
  if (pass_out) *pass_out = std::move(pass);
  return t;
}

TrainReport segment_train(VaeModel& model, const Batch& images, const std::vector<LabelMap>& labels,
                          const TrainConfig& cfg) {
  require(!images.empty() && labels.size() == images.size(), ErrorCode::InvalidMask,
          "one label map per training image is required");
  for (const auto& f : images)
    require(f.same_shape(images[0]), ErrorCode::ShapeMismatch, "training images differ in shape");
  return train_with(model, images.size(), cfg,
                    [&](const std::vector<std::size_t>& items, const std::vector<Eigen::VectorXd>& eps,
                        VaeModel& grad, ForwardPass& pass) {
                      Batch batch;
                      std::vector<const LabelMap*> lab;
                      for (std::size_t k : items) {
                        batch.push_back(images[k]);
                        lab.push_back(&labels[k]);
                      }
                      const SegmentationTerms t =
                          segmentation_loss(model, batch, lab, eps, images.size(), &grad, &pass);
                      return std::make_pair(t.total, 1.0 - t.accuracy);
                    });
}

SegmentPrediction segment_predict(const VaeModel& model, const SkipBanks& banks,
                                  const MultiBandImage& f, double mu, ProxKind prox, int n_runs,
                                  std::uint64_t seed, const LabelMap* truth) {
  const std::size_t K = model.shape.classes;
  require(K >= 2, ErrorCode::InvalidArgument, "model has no segmentation head");
  require(n_runs >= 1, ErrorCode::InvalidArgument, "n_runs must be at least 1");
  const Encoding e = encode(model, f);
  const std::vector<MultiBandImage> skips = smooth_skips(e.skips, banks, mu, prox);
  const std::size_t pixels = f.rows() * f.cols();
  SegmentPrediction out;
  std::vector<std::vector<int>> votes(pixels, std::vector<int>(K, 0));
  for (int r = 0; r < n_runs; ++r) {
    const LatentSample z = reparameterize(e.mean, e.log_variance, seed + static_cast<std::uint64_t>(r));
    const MultiBandImage logits = model.seg_head.forward(decode(model, skips, z.z));
    LabelMap run(pixels);
    for (std::size_t l = 0; l < pixels; ++l) {
      std::size_t best = 0;
      for (std::size_t k = 1; k < K; ++k)
        if (logits[k][l] > logits[best][l]) best = k;
      run[l] = static_cast<std::uint8_t>(best);
      ++votes[l][best];
    }
    out.runs.push_back(std::move(run));
  }
  out.classes.resize(pixels);
  for (std::size_t l = 0; l < pixels; ++l)
    out.classes[l] = static_cast<std::uint8_t>(std::max_element(votes[l].begin(), votes[l].end()) -
                                               votes[l].begin());
  out.std_degenerate = n_runs == 1;
  if (truth) out.accuracy = aggregate_accuracy(out.runs, *truth);
  return out;
}

}  // namespace rq
