#include "rq/noise.hpp"

#include <random>

#include "rq/error.hpp"

namespace rq {

MultiBandImage add_gaussian_noise(const MultiBandImage& f, double sigma, std::uint64_t seed) {
  require(sigma >= 0.0, ErrorCode::InvalidArgument, "noise sigma must be non-negative");
  MultiBandImage out = f;
  if (sigma == 0.0) return out;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, sigma);
  for (std::size_t p = 0; p < out.band_count(); ++p)
    for (double& v : out[p].values()) v += normal(rng);
  return out;
}

}  // namespace rq
