#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rq/image.hpp"

namespace rq {

enum class PsnrPeak { Max, MaxSquared };

// 10 log10(peak / MSE) with peak = max(reference) or its square; MSE over
// all pixels and bands. Returns +infinity when the images coincide.
double psnr(const MultiBandImage& reference, const MultiBandImage& candidate,
            PsnrPeak peak = PsnrPeak::Max);
double mse(const MultiBandImage& reference, const MultiBandImage& candidate);

// Global-statistics SSIM over all pixels and bands with c1 = (0.01 r)^2,
// c2 = (0.03 r)^2 and r = max - min of the reference (1 for a constant one).
double ssim(const MultiBandImage& reference, const MultiBandImage& candidate);

// Per-pixel hit rate over repeated predictions and its Normal-approximation
// standard deviation sqrt(p (1 - p) / n).
struct AccuracySummary {
  std::size_t runs = 0;
  std::vector<double> pixel_rate;
  std::vector<double> pixel_std;
  double mean_rate = 0.0;
  double mean_std = 0.0;
};

AccuracySummary aggregate_accuracy(const std::vector<std::vector<std::uint8_t>>& predictions,
                                   const std::vector<std::uint8_t>& truth);

}  // namespace rq
