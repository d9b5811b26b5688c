#include <cmath>
#include <memory>

#include "oracles.hpp"
#include "report.hpp"
#include "rq/diffusion.hpp"
#include "rq/metrics.hpp"
#include "rq/noise.hpp"
#include "rq/rq_transform.hpp"
#include "rq/synthetic.hpp"
#include "rq/timeseries.hpp"

namespace acceptance {

namespace {

std::shared_ptr<const rq::FilterBank> bank(std::size_t n, int scales = 3, int order = 3) {
  rq::KernelConfig cfg;
  cfg.scales = scales;
  cfg.riesz_order = order;
  return std::make_shared<const rq::FilterBank>(rq::build_filterbank(cfg, n, n));
}

// A nonlinear smoother with no relation to the filter bank: periodic 3 x 3
// mean, then a tanh squash scaled by mu.
class SquashBlur final : public rq::Smoother {
 public:
  rq::MultiBandImage shrink(const rq::MultiBandImage& f, double mu) const override {
    rq::MultiBandImage out = f.zeros_like();
    const std::size_t n1 = f.rows(), n2 = f.cols();
    for (std::size_t p = 0; p < f.band_count(); ++p)
      for (std::size_t r = 0; r < n1; ++r)
        for (std::size_t c = 0; c < n2; ++c) {
          double s = 0.0;
          for (std::size_t a = 0; a < 3; ++a)
            for (std::size_t b = 0; b < 3; ++b) s += f[p]((r + n1 + a - 1) % n1, (c + n2 + b - 1) % n2);
          out[p](r, c) = (1.0 - mu) * f[p](r, c) + mu * std::tanh(s / 9.0);
        }
    return out;
  }
};

double max_abs_diff(const rq::ImageSeries& a, const rq::ImageSeries& b) { return (a - b).max_abs(); }

}  // namespace

void diffusion_inverse(Criterion& c) {
  const rq::MultiBandImage f = oracle::random_multiband(3, 32, 32, 5);
  const rq::RqSmoother rqs(bank(32), rq::ProxKind::SoftThreshold);
  const SquashBlur squash;
  const std::pair<const char*, const rq::Smoother*> smoothers[] = {{"RQ soft", &rqs}, {"tanh blur", &squash}};
  for (const auto& [name, sm] : smoothers)
    for (int N : {5, 30})
      for (double beta : {1.0, 0.5}) {
        const rq::DiffusionRecord rec = rq::diffuse(f, N, 0.3, beta, *sm);
        rq::MultiBandImage sum = rec.residual_term();
        for (const auto& phi : rec.bands) sum.axpy(beta, phi);
        const double err = (sum - f).max_abs();
        c.check(fmt("f = f~(N) + beta sum phi, %s, N = %d, beta = %.1f", name, N, beta), err <= 1e-12,
                fmt("max error %.2e <= 1e-12", err));
      }

  const rq::DiffusionRecord rec = rq::diffuse(f, 30, 0.4, 1.0, rqs);
  double worst = 0.0;
  for (auto [t1, t2] : {std::pair{3, 10}, std::pair{1, 30}, std::pair{7, 7}}) {
    rq::MultiBandImage parts = rq::spectral_filter(rec, {rq::FilterKind::Highpass, t1, t1});
    parts += rq::spectral_filter(rec, {rq::FilterKind::Bandpass, t1, t2});
    parts += rq::spectral_filter(rec, {rq::FilterKind::Lowpass, t2, t2});
    worst = std::max(worst, (parts - f).max_abs());
    rq::MultiBandImage pair = rq::spectral_filter(rec, {rq::FilterKind::Bandstop, t1, t2});
    pair += rq::spectral_filter(rec, {rq::FilterKind::Bandpass, t1, t2});
    worst = std::max(worst, (pair - f).max_abs());
  }
  c.check("high + band + low = f and band + stop = f, N = 30", worst <= 1e-10,
          fmt("max error %.2e <= 1e-10", worst));
}

void denoising_property(Criterion& c) {
  const rq::RqSmoother smoother(bank(64), rq::ProxKind::SoftThreshold);
  const double mus[] = {0.005, 0.01, 0.02, 0.03, 0.05, 0.08, 0.12};
  double min_gain = INFINITY;
  int wins_best = 0, wins_matched = 0;
  double mean_diff = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const rq::MultiBandImage clean = rq::piecewise_constant_image(64, 64, 3, 300 + seed);
    const rq::MultiBandImage noisy = rq::add_gaussian_noise(clean, 0.04, 400 + seed);
    double best1 = -INFINITY, best2 = -INFINITY, s2_at_best1 = -INFINITY;
    for (double mu : mus) {
      const double p1 = rq::psnr(clean, smoother.shrink(noisy, mu));
      const double p2 = rq::psnr(clean, rq::scheme2_denoise(noisy, 10, mu, smoother));
      if (p1 > best1) {
        best1 = p1;
        s2_at_best1 = p2;
      }
      best2 = std::max(best2, p2);
    }
    min_gain = std::min(min_gain, best1 - rq::psnr(clean, noisy));
    wins_best += best2 >= best1;
    wins_matched += s2_at_best1 >= best1;
    mean_diff += (best2 - best1) / 10.0;
  }
  c.check("best-mu scheme 1 gains >= 3 dB over the noisy input on every seed", min_gain >= 3.0,
          fmt("smallest gain %.2f dB", min_gain));
  c.check("scheme 2 (N = 10) PSNR >= scheme 1 PSNR on >= 7 of 10 seeds", wins_best >= 7,
          fmt("best against best: %d of 10, mean difference %.2f dB; at scheme 1's best mu: %d of 10",
              wins_best, mean_diff, wins_matched));
}

void series_identities(Criterion& c) {
  // Columns of W are the coefficient vectors of the unit impulses.
  const int T = 16, levels = 4;
  Eigen::MatrixXd w(T, T);
  for (int j = 0; j < T; ++j) {
    std::vector<double> e(T, 0.0);
    e[j] = 1.0;
    const rq::HaarCoefficients h = rq::haar_forward(e, levels);
    std::vector<double> flat = h.scaling;
    for (const auto& d : h.detail) flat.insert(flat.end(), d.begin(), d.end());
    for (int i = 0; i < T; ++i) w(i, j) = flat[static_cast<std::size_t>(i)];
  }
  const double ortho = (w.transpose() * w - Eigen::MatrixXd::Identity(T, T)).cwiseAbs().maxCoeff();
  c.check("Haar transform orthonormal, T = 16, 4 scales", ortho <= 1e-10, fmt("|W^T W - I| = %.2e", ortho));

  const rq::MultiBandImage still = oracle::random_multiband(3, 16, 16, 9);
  const rq::ImageSeries constant(std::vector<rq::MultiBandImage>(16, still));
  double fixed = 0.0;
  for (double mu : {0.0, 0.01, 0.1, 1.0, 10.0})
    for (int lv : {1, 2, 4})
      fixed = std::max(fixed, max_abs_diff(rq::haar_time_smooth(constant, lv, mu, rq::ProxKind::SoftThreshold),
                                           constant));
  c.check("constant-in-time series is fixed by haar_time_smooth", fixed <= 1e-10, fmt("max change %.2e", fixed));

  const rq::ImageSeries v = rq::seasonal_series(16, 16, 16, 3, 21);
  const rq::RqSmoother spatial(bank(16, 2, 1), rq::ProxKind::SoftThreshold);
  for (rq::SeriesOrder order : {rq::SeriesOrder::SpatialFirst, rq::SeriesOrder::TemporalFirst}) {
    rq::SeriesConfig cfg;
    cfg.order = order;
    const rq::SeriesDecomposition d = rq::scheme2_series(v, cfg, spatial);
    const double err = max_abs_diff(d.lowpass + d.bandpass + d.highpass, v);
    c.check(fmt("scheme2_series allpass, 16 x 16 x 3 x 16, %s",
                order == rq::SeriesOrder::SpatialFirst ? "spatial first" : "temporal first"),
            err <= 1e-10, fmt("max error %.2e <= 1e-10", err));
  }
}

}  // namespace acceptance
