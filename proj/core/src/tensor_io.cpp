#include "rq/tensor_io.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include "rq/error.hpp"

namespace rq {

namespace {

constexpr std::array<char, 4> kTensorMagic{'R', 'Q', 'T', '1'};
constexpr std::array<char, 4> kBundleMagic{'R', 'Q', 'B', '1'};
constexpr std::uint32_t kMaxRank = 8;

void put_u32(std::ostream& out, std::uint32_t v) {
  const char bytes[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                         static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  out.write(bytes, 4);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char bytes[4];
  in.read(reinterpret_cast<char*>(bytes), 4);
  require(in.gcount() == 4, ErrorCode::Io, "truncated tensor stream");
  return std::uint32_t{bytes[0]} | (std::uint32_t{bytes[1]} << 8) | (std::uint32_t{bytes[2]} << 16) |
         (std::uint32_t{bytes[3]} << 24);
}

void expect_magic(std::istream& in, const std::array<char, 4>& magic) {
  std::array<char, 4> got{};
  in.read(got.data(), 4);
  require(in.gcount() == 4 && got == magic, ErrorCode::Io, "bad magic in tensor stream");
}

float narrow(double v) {
  require(std::isfinite(v) && std::abs(v) <= std::numeric_limits<float>::max(), ErrorCode::NonFinite,
          "value does not fit a finite float32");
  return static_cast<float>(v);
}

std::uint32_t dim32(std::size_t n) {
  require(n <= std::numeric_limits<std::uint32_t>::max(), ErrorCode::BadShape, "dimension too large");
  return static_cast<std::uint32_t>(n);
}

}  // namespace

std::size_t Tensor::element_count() const {
  std::size_t n = 1;
  for (std::uint32_t d : dims) n *= d;
  return n;
}

void write_tensor(std::ostream& out, const Tensor& t) {
  require(t.dims.size() <= kMaxRank, ErrorCode::BadShape, "tensor rank too large");
  require(t.data.size() == t.element_count(), ErrorCode::BadShape,
          "tensor payload does not match its dims");
  out.write(kTensorMagic.data(), 4);
  put_u32(out, dim32(t.dims.size()));
  for (std::uint32_t d : t.dims) put_u32(out, d);
  for (float v : t.data) put_u32(out, std::bit_cast<std::uint32_t>(v));
  require(static_cast<bool>(out), ErrorCode::Io, "tensor write failed");
}

Tensor read_tensor(std::istream& in) {
  expect_magic(in, kTensorMagic);
  Tensor t;
  const std::uint32_t rank = get_u32(in);
  require(rank <= kMaxRank, ErrorCode::Io, "tensor rank too large");
  for (std::uint32_t k = 0; k < rank; ++k) t.dims.push_back(get_u32(in));
  double count = 1.0;
  for (std::uint32_t d : t.dims) count *= d;
  require(count <= double(1u << 30), ErrorCode::Io, "tensor payload too large");
  t.data.resize(t.element_count());
  for (float& v : t.data) v = std::bit_cast<float>(get_u32(in));
  return t;
}

void save_tensor(const std::filesystem::path& path, const Tensor& t) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCode::Io, "cannot open " + path.string() + " for writing");
  write_tensor(out, t);
}

Tensor load_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::Io, "cannot open " + path.string());
  Tensor t = read_tensor(in);
  require(in.peek() == std::char_traits<char>::eof(), ErrorCode::Io,
          "trailing bytes after tensor payload in " + path.string());
  return t;
}

Tensor to_tensor(const Image2D& img) {
  Tensor t{{dim32(img.rows()), dim32(img.cols())}, {}};
  t.data.reserve(img.size());
  for (double v : img.values()) t.data.push_back(narrow(v));
  return t;
}

Tensor to_tensor(const MultiBandImage& img) {
  Tensor t{{dim32(img.band_count()), dim32(img.rows()), dim32(img.cols())}, {}};
  t.data.reserve(img.size());
  for (const Image2D& band : img.bands())
    for (double v : band.values()) t.data.push_back(narrow(v));
  return t;
}

Tensor to_tensor(const ImageSeries& series) {
  Tensor t{{dim32(series.frame_count()), dim32(series.band_count()), dim32(series.rows()),
            dim32(series.cols())},
           {}};
  for (const MultiBandImage& f : series.frames())
    for (const Image2D& band : f.bands())
      for (double v : band.values()) t.data.push_back(narrow(v));
  return t;
}

MultiBandImage tensor_to_image(const Tensor& t) {
  require(t.dims.size() == 2 || t.dims.size() == 3, ErrorCode::BadShape,
          "image tensors have rank 2 or 3");
  const std::size_t P = t.dims.size() == 2 ? 1 : t.dims[0];
  const std::size_t n1 = t.dims[t.dims.size() - 2], n2 = t.dims.back();
  require(P > 0 && n1 > 0 && n2 > 0, ErrorCode::BadShape, "empty image tensor");
  require(t.data.size() == P * n1 * n2, ErrorCode::BadShape, "tensor payload does not match its dims");
  std::vector<Image2D> bands;
  for (std::size_t p = 0; p < P; ++p) {
    std::vector<double> v(t.data.begin() + static_cast<std::ptrdiff_t>(p * n1 * n2),
                          t.data.begin() + static_cast<std::ptrdiff_t>((p + 1) * n1 * n2));
    bands.emplace_back(n1, n2, std::move(v));
  }
  return MultiBandImage(std::move(bands));
}

ImageSeries tensor_to_series(const Tensor& t) {
  require(t.dims.size() == 4, ErrorCode::BadShape, "series tensors have rank 4");
  const std::size_t T = t.dims[0];
  require(T > 0, ErrorCode::BadShape, "empty series tensor");
  const std::size_t frame = t.element_count() / T;
  std::vector<MultiBandImage> frames;
  for (std::size_t k = 0; k < T; ++k) {
    Tensor f{{t.dims[1], t.dims[2], t.dims[3]}, {}};
    f.data.assign(t.data.begin() + static_cast<std::ptrdiff_t>(k * frame),
                  t.data.begin() + static_cast<std::ptrdiff_t>((k + 1) * frame));
    frames.push_back(tensor_to_image(f));
  }
  return ImageSeries(std::move(frames));
}

void save_bundle(const std::filesystem::path& path, const TensorBundle& bundle) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCode::Io, "cannot open " + path.string() + " for writing");
  out.write(kBundleMagic.data(), 4);
  put_u32(out, dim32(bundle.size()));
  for (const auto& [name, t] : bundle) {
    put_u32(out, dim32(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    write_tensor(out, t);
  }
}

TensorBundle load_bundle(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::Io, "cannot open " + path.string());
  expect_magic(in, kBundleMagic);
  TensorBundle out;
  const std::uint32_t count = get_u32(in);
  for (std::uint32_t k = 0; k < count; ++k) {
    const std::uint32_t len = get_u32(in);
    require(len < 4096, ErrorCode::Io, "bundle entry name too long");
    std::string name(len, '\0');
    in.read(name.data(), len);
    require(in.gcount() == static_cast<std::streamsize>(len), ErrorCode::Io, "truncated bundle");
    out.emplace_back(std::move(name), read_tensor(in));
  }
  return out;
}

}  // namespace rq
