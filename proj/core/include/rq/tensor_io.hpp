#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "rq/image.hpp"

namespace rq {

// In-memory form of an .rqt file: "RQT1", u32 rank, rank u32 dims, then a
// row-major float32 payload, all little-endian.
struct Tensor {
  std::vector<std::uint32_t> dims;
  std::vector<float> data;

  std::size_t element_count() const;
};

void write_tensor(std::ostream& out, const Tensor& t);
Tensor read_tensor(std::istream& in);
void save_tensor(const std::filesystem::path& path, const Tensor& t);
Tensor load_tensor(const std::filesystem::path& path);

Tensor to_tensor(const Image2D& img);          // [n1, n2]
Tensor to_tensor(const MultiBandImage& img);   // [P, n1, n2]
Tensor to_tensor(const ImageSeries& series);   // [T, P, n1, n2]
// Rank 2 loads as one band.
MultiBandImage tensor_to_image(const Tensor& t);
ImageSeries tensor_to_series(const Tensor& t);

// Named tensors in one file: "RQB1", u32 count, then per entry a u32 name
// length, the name bytes and an embedded .rqt record.
using TensorBundle = std::vector<std::pair<std::string, Tensor>>;
void save_bundle(const std::filesystem::path& path, const TensorBundle& bundle);
TensorBundle load_bundle(const std::filesystem::path& path);

}  // namespace rq
