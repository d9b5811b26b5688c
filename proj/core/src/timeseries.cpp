#include "rq/timeseries.hpp"

#include <cmath>
#include <numbers>

#include "rq/parallel.hpp"

namespace rq {

namespace {

void check_length(std::size_t T, int levels) {
  require(levels >= 1 && levels < 31, ErrorCode::BadLength, "temporal scales must be in [1, 30]");
  const std::size_t block = std::size_t{1} << levels;
  require(T > 0 && T % block == 0, ErrorCode::BadLength,
          "series length must be a positive multiple of 2^levels");
}

}  // namespace

HaarCoefficients haar_forward(std::span<const double> signal, int levels) {
  check_length(signal.size(), levels);
  constexpr double r = std::numbers::sqrt2 / 2.0;
  HaarCoefficients out;
  std::vector<double> approx(signal.begin(), signal.end());
  for (int i = 1; i <= levels; ++i) {
    const std::size_t half = approx.size() / 2;
    std::vector<double> next(half), detail(half);
    for (std::size_t m = 0; m < half; ++m) {
      next[m] = r * (approx[2 * m] + approx[2 * m + 1]);
      detail[m] = r * (approx[2 * m] - approx[2 * m + 1]);
    }
    out.detail.push_back(std::move(detail));
    approx = std::move(next);
  }
  out.scaling = std::move(approx);
  return out;
}

std::vector<double> haar_inverse(const HaarCoefficients& coeffs) {
  constexpr double r = std::numbers::sqrt2 / 2.0;
  std::vector<double> approx = coeffs.scaling;
  for (auto it = coeffs.detail.rbegin(); it != coeffs.detail.rend(); ++it) {
    require(it->size() == approx.size(), ErrorCode::BadLength, "inconsistent Haar coefficients");
    std::vector<double> next(2 * approx.size());
    for (std::size_t m = 0; m < approx.size(); ++m) {
      next[2 * m] = r * (approx[m] + (*it)[m]);
      next[2 * m + 1] = r * (approx[m] - (*it)[m]);
    }
    approx = std::move(next);
  }
  return approx;
}

ImageSeries haar_time_smooth(const ImageSeries& v, int levels, double mu, ProxKind prox) {
  const std::size_t T = v.frame_count();
  check_length(T, levels);
  const ProximalRule rule(prox, mu);
  ImageSeries out = v;
  const std::size_t bands = v.band_count(), pixels = v.rows() * v.cols();
  parallel_for(bands, [&](std::size_t p) {
    std::vector<double> signal(T);
    for (std::size_t k = 0; k < pixels; ++k) {
      for (std::size_t t = 0; t < T; ++t) signal[t] = v[t][p][k];
      HaarCoefficients c = haar_forward(signal, levels);
      for (auto& d : c.detail) prox_apply_inplace(rule, d);
      const std::vector<double> back = haar_inverse(c);
      for (std::size_t t = 0; t < T; ++t) out[t][p][k] = back[t];
    }
  });
  return out;
}

ImageSeries series_step(const ImageSeries& v, const SeriesConfig& cfg, const Smoother& spatial) {
  auto spatial_pass = [&](const ImageSeries& s) {
    std::vector<MultiBandImage> frames(s.frame_count());
    for (std::size_t t = 0; t < frames.size(); ++t) frames[t] = spatial.shrink(s[t], cfg.mu_spatial);
    return ImageSeries(std::move(frames));
  };
  if (cfg.order == SeriesOrder::SpatialFirst)
    return haar_time_smooth(spatial_pass(v), cfg.time_scales, cfg.mu_time, cfg.prox);
  return spatial_pass(haar_time_smooth(v, cfg.time_scales, cfg.mu_time, cfg.prox));
}

SeriesDecomposition scheme2_series(const ImageSeries& v, const SeriesConfig& cfg,
                                   const Smoother& spatial) {
  require(cfg.iterations >= 2, ErrorCode::InvalidArgument, "series decomposition needs N >= 2");
  check_length(v.frame_count(), cfg.time_scales);
  SeriesDecomposition out;
  out.record = diffuse_with<ImageSeries>(
      v, cfg.iterations, cfg.beta,
      [&](const ImageSeries& s) { return series_step(s, cfg, spatial); });
  out.tau1 = cfg.tau1;
  out.tau2 = cfg.tau2;
  if (out.tau1 < 0 || out.tau2 < 0) {
    const std::vector<int> picked = pick_thresholds(out.record.spectrum, 2);
    require(picked.size() == 2, ErrorCode::BadThresholds, "spectrum too short to pick thresholds");
    out.tau1 = picked[0];
    out.tau2 = picked[1];
  }
  const int N = cfg.iterations;
  SpectralFilter high{FilterKind::Highpass, out.tau1, out.tau1};
  SpectralFilter band{FilterKind::Bandpass, out.tau1, out.tau2};
  SpectralFilter low{FilterKind::Lowpass, out.tau2, out.tau2};
  high.validate(N);
  band.validate(N);
  low.validate(N);
  out.highpass = spectral_filter(out.record, high);
  out.bandpass = spectral_filter(out.record, band);
  out.lowpass = spectral_filter(out.record, low);
  return out;
}

}  // namespace rq
