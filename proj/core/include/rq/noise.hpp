#pragma once

#include <cstdint>

#include "rq/image.hpp"

namespace rq {

// f + sigma * N(0, 1) per pixel and band, seeded, without clipping.
MultiBandImage add_gaussian_noise(const MultiBandImage& f, double sigma, std::uint64_t seed);

}  // namespace rq
