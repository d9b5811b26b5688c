#include "rq/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "rq/error.hpp"

namespace rq {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  FilePtr f(std::fopen(path.string().c_str(), mode));
  require(f != nullptr, ErrorCode::Io, "cannot open " + path.string());
  return f;
}

unsigned quantize(double v, PngScale s, unsigned top) {
  const double t = std::clamp((v - s.lo) / (s.hi - s.lo), 0.0, 1.0);
  return static_cast<unsigned>(std::lround(t * top));
}

// Interleaved samples, rows x (cols * channels), in big-endian byte order.
void write_samples(const std::filesystem::path& path, std::size_t rows, std::size_t cols,
                   int channels, int bit_depth, const std::vector<unsigned>& samples) {
  require(bit_depth == 8 || bit_depth == 16, ErrorCode::InvalidArgument, "PNG depth must be 8 or 16");
  FilePtr file = open_file(path, "wb");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  require(png != nullptr, ErrorCode::Io, "png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  const std::size_t bytes = bit_depth / 8;
  std::vector<png_byte> buffer(rows * cols * static_cast<std::size_t>(channels) * bytes);
  for (std::size_t k = 0; k < samples.size(); ++k) {
    if (bytes == 2) {
      buffer[2 * k] = static_cast<png_byte>(samples[k] >> 8);
      buffer[2 * k + 1] = static_cast<png_byte>(samples[k] & 0xff);
    } else {
      buffer[k] = static_cast<png_byte>(samples[k]);
    }
  }
  std::vector<png_bytep> row_ptrs(rows);
  for (std::size_t r = 0; r < rows; ++r)
    row_ptrs[r] = buffer.data() + r * cols * static_cast<std::size_t>(channels) * bytes;
  if (info == nullptr || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    fail(ErrorCode::Io, "libpng failed writing " + path.string());
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(cols), static_cast<png_uint_32>(rows), bit_depth,
               channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, row_ptrs.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace

void write_png_gray(const std::filesystem::path& path, const Image2D& img, int bit_depth,
                    PngScale scale) {
  require(scale.hi > scale.lo, ErrorCode::InvalidArgument, "PNG scale needs hi > lo");
  const unsigned top = (1u << bit_depth) - 1;
  std::vector<unsigned> samples;
  samples.reserve(img.size());
  for (double v : img.values()) samples.push_back(quantize(v, scale, top));
  write_samples(path, img.rows(), img.cols(), 1, bit_depth, samples);
}

void write_png_rgb(const std::filesystem::path& path, const MultiBandImage& img, int bit_depth,
                   PngScale scale) {
  require(img.band_count() == 3, ErrorCode::BandCountMismatch, "RGB export needs three bands");
  require(scale.hi > scale.lo, ErrorCode::InvalidArgument, "PNG scale needs hi > lo");
  const unsigned top = (1u << bit_depth) - 1;
  std::vector<unsigned> samples;
  samples.reserve(img.size());
  const std::size_t pixels = img.rows() * img.cols();
  for (std::size_t k = 0; k < pixels; ++k)
    for (std::size_t p = 0; p < 3; ++p) samples.push_back(quantize(img[p][k], scale, top));
  write_samples(path, img.rows(), img.cols(), 3, bit_depth, samples);
}

std::vector<std::filesystem::path> write_png_bands(const std::filesystem::path& dir,
                                                   const std::string& stem, const MultiBandImage& img,
                                                   bool rgb, int bit_depth, PngScale scale) {
  std::vector<std::filesystem::path> out;
  if (rgb && img.band_count() == 3) {
    out.push_back(dir / (stem + ".png"));
    write_png_rgb(out.back(), img, bit_depth, scale);
    return out;
  }
  for (std::size_t p = 0; p < img.band_count(); ++p) {
    out.push_back(dir / (stem + "_b" + std::to_string(p) + ".png"));
    write_png_gray(out.back(), img[p], bit_depth, scale);
  }
  return out;
}

MultiBandImage read_png(const std::filesystem::path& path) {
  FilePtr file = open_file(path, "rb");
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  require(png != nullptr, ErrorCode::Io, "png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  std::vector<png_byte> buffer;
  std::vector<png_bytep> row_ptrs;
  if (info == nullptr || setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(ErrorCode::Io, "libpng failed reading " + path.string());
  }
  png_init_io(png, file.get());
  png_read_info(png, info);
  // Normalize to 8/16-bit gray or RGB without alpha or palette.
  const png_byte color = png_get_color_type(png, info);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8)
    png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  png_set_strip_alpha(png);
  png_read_update_info(png, info);
  const std::size_t rows = png_get_image_height(png, info), cols = png_get_image_width(png, info);
  const int channels = png_get_channels(png, info), depth = png_get_bit_depth(png, info);
  const std::size_t stride = png_get_rowbytes(png, info);
  buffer.resize(rows * stride);
  row_ptrs.resize(rows);
  for (std::size_t r = 0; r < rows; ++r) row_ptrs[r] = buffer.data() + r * stride;
  png_read_image(png, row_ptrs.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  require(channels == 1 || channels == 3, ErrorCode::Io, "unsupported PNG channel layout");
  const double top = depth == 16 ? 65535.0 : 255.0;
  MultiBandImage out(static_cast<std::size_t>(channels), rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      for (int p = 0; p < channels; ++p) {
        const std::size_t k = c * static_cast<std::size_t>(channels) + static_cast<std::size_t>(p);
        const unsigned v = depth == 16 ? (unsigned{row_ptrs[r][2 * k]} << 8) | row_ptrs[r][2 * k + 1]
                                       : row_ptrs[r][k];
        out[static_cast<std::size_t>(p)](r, c) = v / top;
      }
  return out;
}

}  // namespace rq
