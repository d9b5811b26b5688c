#include "rq/vae_smooth.hpp"

#include "rq/error.hpp"

namespace rq {

SkipBanks::SkipBanks(KernelConfig cfg) : cfg_(cfg) { cfg_.validate(); }

std::shared_ptr<const FilterBank> SkipBanks::at(std::size_t n1, std::size_t n2) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto& slot = banks_[{n1, n2}];
  if (!slot) slot = std::make_shared<const FilterBank>(build_filterbank(cfg_, n1, n2));
  return slot;
}

std::vector<MultiBandImage> smooth_skips(const std::vector<MultiBandImage>& skips,
                                         const SkipBanks& banks, double mu, ProxKind prox) {
  const ProximalRule rule(prox, mu);
  std::vector<MultiBandImage> out;
  out.reserve(skips.size());
  for (const auto& c : skips) out.push_back(shrink_smooth(c, *banks.at(c.rows(), c.cols()), mu, rule));
  return out;
}

MultiBandImage vae_smooth(const VaeModel& model, const SkipBanks& banks, const MultiBandImage& f,
                          double mu, ProxKind prox, std::uint64_t seed) {
  const Encoding e = encode(model, f);
  const LatentSample z = reparameterize(e.mean, e.log_variance, seed);
  return decode(model, smooth_skips(e.skips, banks, mu, prox), z.z);
}

VaeSmoother::VaeSmoother(std::shared_ptr<const VaeModel> model, std::shared_ptr<const SkipBanks> banks,
                         ProxKind prox, std::uint64_t seed)
    : model_(std::move(model)), banks_(std::move(banks)), prox_(prox), seed_(seed) {
  require(model_ && banks_, ErrorCode::InvalidArgument, "VAE smoother needs a model and banks");
}

MultiBandImage VaeSmoother::shrink(const MultiBandImage& f, double mu) const {
  return vae_smooth(*model_, *banks_, f, mu, prox_, seed_);
}

}  // namespace rq
