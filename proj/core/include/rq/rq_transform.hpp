#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "rq/image.hpp"
#include "rq/kernels.hpp"
#include "rq/proximal.hpp"

namespace rq {

// Non-subsampled coefficients: every plane has the source dimensions.
struct WaveletCoefficients {
  std::uint64_t bank_id = 0;
  std::vector<Image2D> scaling;                         // [band]
  std::vector<std::vector<std::vector<Image2D>>> wavelet;  // [scale][channel][band]

  std::size_t band_count() const noexcept { return scaling.size(); }
  double max_abs_wavelet() const;
};

// c = idft2(conj(phi~) F), d_il = idft2(conj(psi~_il) F), per band.
WaveletCoefficients analyze(const MultiBandImage& f, const FilterBank& bank);

// F = phi C + sum_il psi_il D_il. Throws BankMismatch if the coefficients
// came from a different bank.
MultiBandImage synthesize(const WaveletCoefficients& coeffs, const FilterBank& bank);

// Analysis, prox at threshold mu on every wavelet plane (scaling untouched),
// synthesis.
MultiBandImage shrink_smooth(const MultiBandImage& f, const FilterBank& bank, double mu,
                             const ProximalRule& prox);

// Contract shared by everything that can drive the iterative schemes: maps an
// image to a smoothed image of the same shape and is the identity at mu = 0.
class Smoother {
 public:
  virtual ~Smoother() = default;
  virtual MultiBandImage shrink(const MultiBandImage& f, double mu) const = 0;
};

class IdentitySmoother final : public Smoother {
 public:
  MultiBandImage shrink(const MultiBandImage& f, double) const override { return f; }
};

class RqSmoother final : public Smoother {
 public:
  RqSmoother(std::shared_ptr<const FilterBank> bank, ProxKind kind);
  MultiBandImage shrink(const MultiBandImage& f, double mu) const override;
  const FilterBank& bank() const { return *bank_; }

 private:
  std::shared_ptr<const FilterBank> bank_;
  ProxKind kind_;
};

}  // namespace rq
