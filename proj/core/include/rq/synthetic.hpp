#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rq/image.hpp"

namespace rq {

// Piecewise-constant scene in [0, 1]: a flat background overlaid with random
// rectangles and discs, each with its own value per band.
MultiBandImage piecewise_constant_image(std::size_t rows, std::size_t cols, std::size_t bands,
                                        std::uint64_t seed, int shapes = 8);

// Two-class scene: class 1 inside random discs and rectangles. Pixel values
// are class_level[c] per band plus a small per-image offset.
struct LabeledImage {
  MultiBandImage image;
  std::vector<std::uint8_t> mask;  // row-major, values 0 or 1
};

LabeledImage two_class_image(std::size_t rows, std::size_t cols, std::size_t bands,
                             std::uint64_t seed, double level0 = 0.4, double level1 = 0.6);

// Static piecewise-constant scene whose regions brighten and darken
// seasonally over T frames.
ImageSeries seasonal_series(std::size_t frames, std::size_t rows, std::size_t cols,
                            std::size_t bands, std::uint64_t seed);

}  // namespace rq
