#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "rq/kernels.hpp"
#include "rq/proximal.hpp"
#include "rq/rq_transform.hpp"
#include "rq/vae.hpp"

namespace rq {

// Filter banks for the skip planes, built lazily once per resolution.
class SkipBanks {
 public:
  explicit SkipBanks(KernelConfig cfg);

  std::shared_ptr<const FilterBank> at(std::size_t n1, std::size_t n2) const;
  const KernelConfig& config() const { return cfg_; }

 private:
  KernelConfig cfg_;
  mutable std::mutex mutex_;
  mutable std::map<std::pair<std::size_t, std::size_t>, std::shared_ptr<const FilterBank>> banks_;
};

// RQ shrinkage of every skip plane with the bank at its resolution.
std::vector<MultiBandImage> smooth_skips(const std::vector<MultiBandImage>& skips,
                                         const SkipBanks& banks, double mu, ProxKind prox);

// encode, shrink the skips, sample z with the seed, decode.
MultiBandImage vae_smooth(const VaeModel& model, const SkipBanks& banks, const MultiBandImage& f,
                          double mu, ProxKind prox, std::uint64_t seed);

// vae_smooth behind the Smoother interface. It equals decode o encode at
// mu = 0, which is the identity only for a perfect autoencoder.
class VaeSmoother final : public Smoother {
 public:
  VaeSmoother(std::shared_ptr<const VaeModel> model, std::shared_ptr<const SkipBanks> banks,
              ProxKind prox, std::uint64_t seed);
  MultiBandImage shrink(const MultiBandImage& f, double mu) const override;

 private:
  std::shared_ptr<const VaeModel> model_;
  std::shared_ptr<const SkipBanks> banks_;
  ProxKind prox_;
  std::uint64_t seed_;
};

}  // namespace rq
