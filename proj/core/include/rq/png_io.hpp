#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rq/image.hpp"

namespace rq {

// Values are mapped from [lo, hi] to the full integer range and clipped.
struct PngScale {
  double lo = 0.0;
  double hi = 1.0;
};

void write_png_gray(const std::filesystem::path& path, const Image2D& img, int bit_depth = 16,
                    PngScale scale = {});
// Three bands as an RGB composite.
void write_png_rgb(const std::filesystem::path& path, const MultiBandImage& img, int bit_depth = 16,
                   PngScale scale = {});
// One PNG per band named <stem>_b<p>.png, or a single RGB file when P == 3
// and rgb is set. Returns the paths written.
std::vector<std::filesystem::path> write_png_bands(const std::filesystem::path& dir,
                                                   const std::string& stem, const MultiBandImage& img,
                                                   bool rgb, int bit_depth = 16, PngScale scale = {});

// Gray or RGB(A) input, 8 or 16 bit, scaled to [0, 1]; alpha is dropped.
MultiBandImage read_png(const std::filesystem::path& path);

}  // namespace rq
