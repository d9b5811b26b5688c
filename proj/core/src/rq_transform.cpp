#include "rq/rq_transform.hpp"

#include <algorithm>

#include "rq/error.hpp"
#include "rq/fft.hpp"
#include "rq/parallel.hpp"

namespace rq {

namespace {

Image2D filter_conj(const Spectrum2D& spectrum, const Spectrum2D& filter) {
  Spectrum2D prod(spectrum.rows(), spectrum.cols());
  for (std::size_t k = 0; k < prod.size(); ++k) prod[k] = std::conj(filter[k]) * spectrum[k];
  return idft2(prod);
}

void accumulate(Spectrum2D& acc, const Spectrum2D& filter, const Image2D& plane) {
  const Spectrum2D s = dft2(plane);
  for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += filter[k] * s[k];
}

}  // namespace

double WaveletCoefficients::max_abs_wavelet() const {
  double m = 0.0;
  for (const auto& scale : wavelet)
    for (const auto& channel : scale)
      for (const auto& plane : channel) m = std::max(m, plane.max_abs());
  return m;
}

WaveletCoefficients analyze(const MultiBandImage& f, const FilterBank& bank) {
  require(f.rows() == bank.n1 && f.cols() == bank.n2, ErrorCode::DimensionMismatch,
          "image dimensions differ from the filter bank grid");
  const std::size_t P = f.band_count(), S = bank.scale_count(), C = bank.channel_count();
  WaveletCoefficients out;
  out.bank_id = bank.id;
  out.scaling.resize(P);
  out.wavelet.assign(S, std::vector<std::vector<Image2D>>(C, std::vector<Image2D>(P)));
  parallel_for(P, [&](std::size_t p) {
    const Spectrum2D F = dft2(f[p]);
    out.scaling[p] = filter_conj(F, bank.scaling_dual);
    for (std::size_t i = 0; i < S; ++i)
      for (std::size_t l = 0; l < C; ++l) out.wavelet[i][l][p] = filter_conj(F, bank.wavelet_dual[i][l]);
  });
  return out;
}

MultiBandImage synthesize(const WaveletCoefficients& coeffs, const FilterBank& bank) {
  require(coeffs.bank_id == bank.id, ErrorCode::BankMismatch,
          "coefficients were produced by a different filter bank");
  const std::size_t P = coeffs.band_count(), S = bank.scale_count(), C = bank.channel_count();
  require(P > 0 && coeffs.wavelet.size() == S, ErrorCode::DimensionMismatch,
          "coefficient layout does not match the bank");
  require(coeffs.scaling[0].rows() == bank.n1 && coeffs.scaling[0].cols() == bank.n2,
          ErrorCode::DimensionMismatch, "coefficient planes differ from the bank grid");
  std::vector<Image2D> bands(P);
  parallel_for(P, [&](std::size_t p) {
    Spectrum2D acc(bank.n1, bank.n2);
    accumulate(acc, bank.scaling_primal, coeffs.scaling[p]);
    for (std::size_t i = 0; i < S; ++i)
      for (std::size_t l = 0; l < C; ++l)
        accumulate(acc, bank.wavelet_primal[i][l], coeffs.wavelet[i][l][p]);
    bands[p] = idft2(acc);
  });
  return MultiBandImage(std::move(bands));
}

MultiBandImage shrink_smooth(const MultiBandImage& f, const FilterBank& bank, double mu,
                             const ProximalRule& prox) {
  require(mu >= 0.0, ErrorCode::InvalidArgument, "mu must be non-negative");
  WaveletCoefficients c = analyze(f, bank);
  const ProximalRule rule = prox.with_threshold(mu);
  for (auto& scale : c.wavelet)
    for (auto& channel : scale)
      for (auto& plane : channel) prox_apply_inplace(rule, plane.values());
  return synthesize(c, bank);
}

RqSmoother::RqSmoother(std::shared_ptr<const FilterBank> bank, ProxKind kind)
    : bank_(std::move(bank)), kind_(kind) {
  require(bank_ != nullptr, ErrorCode::InvalidArgument, "smoother needs a filter bank");
}

MultiBandImage RqSmoother::shrink(const MultiBandImage& f, double mu) const {
  return shrink_smooth(f, *bank_, mu, ProximalRule(kind_, mu));
}

}  // namespace rq
