#pragma once

#include <span>
#include <vector>

#include "rq/diffusion.hpp"
#include "rq/image.hpp"
#include "rq/proximal.hpp"
#include "rq/rq_transform.hpp"

namespace rq {

// Orthonormal Haar expansion of a length-T signal over `levels` dyadic scales.
// detail[i - 1][m] = 2^{-i/2} (sum of the first half of block m at scale i
// minus the sum of its second half); scaling[m] = 2^{-I/2} (block sum).
struct HaarCoefficients {
  std::vector<double> scaling;
  std::vector<std::vector<double>> detail;
};

HaarCoefficients haar_forward(std::span<const double> signal, int levels);  // throws BadLength
std::vector<double> haar_inverse(const HaarCoefficients& coeffs);

// Per pixel and band: Haar along time, prox (threshold mu) on the detail
// coefficients only, inverse.
ImageSeries haar_time_smooth(const ImageSeries& v, int levels, double mu, ProxKind prox);

enum class SeriesOrder { SpatialFirst, TemporalFirst };

struct SeriesConfig {
  int iterations = 10;
  double mu_spatial = 0.03;
  double mu_time = 0.03;
  double beta = 1.0;
  ProxKind prox = ProxKind::SoftThreshold;
  int time_scales = 1;
  // Thresholds split the spectrum into highpass t < tau1, bandpass
  // tau1 <= t < tau2 and lowpass t >= tau2. Negative values select them from
  // the two largest spectrum jumps.
  int tau1 = -1;
  int tau2 = -1;
  SeriesOrder order = SeriesOrder::SpatialFirst;
};

struct SeriesDecomposition {
  ImageSeries lowpass;
  ImageSeries bandpass;
  ImageSeries highpass;
  int tau1 = 0;
  int tau2 = 0;
  DiffusionRecordT<ImageSeries> record;
};

// One diffusion step: spatial smoothing of every frame and temporal Haar
// smoothing, in the configured order.
ImageSeries series_step(const ImageSeries& v, const SeriesConfig& cfg, const Smoother& spatial);

SeriesDecomposition scheme2_series(const ImageSeries& v, const SeriesConfig& cfg,
                                   const Smoother& spatial);

}  // namespace rq
