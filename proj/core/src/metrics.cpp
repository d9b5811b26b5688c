#include "rq/metrics.hpp"

#include <cmath>
#include <limits>

#include "rq/error.hpp"

namespace rq {

namespace {

void check_pair(const MultiBandImage& a, const MultiBandImage& b) {
  require(a.band_count() > 0 && a.same_shape(b), ErrorCode::ShapeMismatch,
          "metric inputs must share a non-empty shape");
}

}  // namespace

double mse(const MultiBandImage& reference, const MultiBandImage& candidate) {
  check_pair(reference, candidate);
  return (reference - candidate).sum_squares() / static_cast<double>(reference.size());
}

double psnr(const MultiBandImage& reference, const MultiBandImage& candidate, PsnrPeak peak) {
  const double err = mse(reference, candidate);
  if (err == 0.0) return std::numeric_limits<double>::infinity();
  double top = reference.max_value();
  if (peak == PsnrPeak::MaxSquared) top *= top;
  return 10.0 * std::log10(top / err);
}

double ssim(const MultiBandImage& reference, const MultiBandImage& candidate) {
  check_pair(reference, candidate);
  const double n = static_cast<double>(reference.size());
  double mf = 0.0, mg = 0.0;
  for (std::size_t p = 0; p < reference.band_count(); ++p)
    for (std::size_t k = 0; k < reference[p].size(); ++k) {
      mf += reference[p][k];
      mg += candidate[p][k];
    }
  mf /= n;
  mg /= n;
  double vf = 0.0, vg = 0.0, cov = 0.0;
  for (std::size_t p = 0; p < reference.band_count(); ++p)
    for (std::size_t k = 0; k < reference[p].size(); ++k) {
      const double a = reference[p][k] - mf, b = candidate[p][k] - mg;
      vf += a * a;
      vg += b * b;
      cov += a * b;
    }
  vf /= n;
  vg /= n;
  cov /= n;
  double r = reference.max_value() - reference.min_value();
  if (r <= 0.0) r = 1.0;
  const double c1 = (0.01 * r) * (0.01 * r), c2 = (0.03 * r) * (0.03 * r);
  // c2 kept in the numerator so identical images score exactly 1.
  return (2.0 * mf * mg + c1) * (2.0 * cov + c2) / ((mf * mf + mg * mg + c1) * (vf + vg + c2));
}

AccuracySummary aggregate_accuracy(const std::vector<std::vector<std::uint8_t>>& predictions,
                                   const std::vector<std::uint8_t>& truth) {
  require(!predictions.empty(), ErrorCode::InvalidArgument, "no predictions to aggregate");
  require(!truth.empty(), ErrorCode::InvalidMask, "empty ground truth");
  AccuracySummary out;
  out.runs = predictions.size();
  out.pixel_rate.assign(truth.size(), 0.0);
  for (const auto& pred : predictions) {
    require(pred.size() == truth.size(), ErrorCode::InvalidMask,
            "prediction and ground truth sizes differ");
    for (std::size_t l = 0; l < truth.size(); ++l)
      if (pred[l] == truth[l]) out.pixel_rate[l] += 1.0;
  }
  const double n = static_cast<double>(out.runs);
  out.pixel_std.resize(truth.size());
  for (std::size_t l = 0; l < truth.size(); ++l) {
    const double p = out.pixel_rate[l] / n;
    out.pixel_rate[l] = p;
    out.pixel_std[l] = std::sqrt(p * (1.0 - p) / n);
    out.mean_rate += p;
    out.mean_std += out.pixel_std[l];
  }
  out.mean_rate /= static_cast<double>(truth.size());
  out.mean_std /= static_cast<double>(truth.size());
  return out;
}

}  // namespace rq
