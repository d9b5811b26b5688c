#include "rq/image.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "rq/error.hpp"

namespace rq {

namespace {

void check_dims(std::size_t rows, std::size_t cols) {
  require(rows > 0 && cols > 0, ErrorCode::BadShape,
          "image dimensions must be positive, got " + std::to_string(rows) + "x" +
              std::to_string(cols));
}

template <typename Container, typename Fn>
double reduce(const Container& items, double init, Fn fn) {
  double acc = init;
  for (const auto& item : items) acc = fn(acc, item);
  return acc;
}

}  // namespace

Image2D::Image2D(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
  check_dims(rows, cols);
  require(std::isfinite(fill), ErrorCode::NonFinite, "fill value is not finite");
}

Image2D::Image2D(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  check_dims(rows, cols);
  require(data_.size() == rows * cols, ErrorCode::ShapeMismatch,
          "data length " + std::to_string(data_.size()) + " != " + std::to_string(rows * cols));
  validate_finite();
}

void Image2D::validate_finite() const {
  for (double v : data_)
    require(std::isfinite(v), ErrorCode::NonFinite, "image contains a non-finite value");
}

Image2D& Image2D::operator+=(const Image2D& other) { return axpy(1.0, other); }

Image2D& Image2D::operator-=(const Image2D& other) { return axpy(-1.0, other); }

Image2D& Image2D::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

Image2D& Image2D::axpy(double s, const Image2D& other) {
  require(same_shape(other), ErrorCode::DimensionMismatch, "image shapes differ");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += s * other.data_[i];
  return *this;
}

double Image2D::sum_squares() const {
  return reduce(data_, 0.0, [](double a, double v) { return a + v * v; });
}

double Image2D::l1_norm() const {
  return reduce(data_, 0.0, [](double a, double v) { return a + std::abs(v); });
}

double Image2D::max_value() const { return *std::max_element(data_.begin(), data_.end()); }

double Image2D::min_value() const { return *std::min_element(data_.begin(), data_.end()); }

double Image2D::max_abs() const {
  return reduce(data_, 0.0, [](double a, double v) { return std::max(a, std::abs(v)); });
}

Image2D operator+(Image2D a, const Image2D& b) { return a += b; }
Image2D operator-(Image2D a, const Image2D& b) { return a -= b; }
Image2D operator*(double s, Image2D a) { return a *= s; }

double dot(const Image2D& a, const Image2D& b) {
  require(a.same_shape(b), ErrorCode::DimensionMismatch, "image shapes differ");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

MultiBandImage::MultiBandImage(std::size_t bands, std::size_t rows, std::size_t cols,
                               double fill) {
  require(bands > 0, ErrorCode::BadShape, "a multi-band image needs at least one band");
  bands_.assign(bands, Image2D(rows, cols, fill));
}

MultiBandImage::MultiBandImage(std::vector<Image2D> bands) : bands_(std::move(bands)) {
  require(!bands_.empty(), ErrorCode::BadShape, "a multi-band image needs at least one band");
  for (const auto& b : bands_)
    require(b.same_shape(bands_[0]) && !b.empty(), ErrorCode::DimensionMismatch,
            "all bands must share dimensions");
}

bool MultiBandImage::same_shape(const MultiBandImage& other) const noexcept {
  return band_count() == other.band_count() && rows() == other.rows() && cols() == other.cols();
}

void MultiBandImage::validate_finite() const {
  for (const auto& b : bands_) b.validate_finite();
}

MultiBandImage& MultiBandImage::operator+=(const MultiBandImage& other) {
  return axpy(1.0, other);
}

MultiBandImage& MultiBandImage::operator-=(const MultiBandImage& other) {
  return axpy(-1.0, other);
}

MultiBandImage& MultiBandImage::operator*=(double s) {
  for (auto& b : bands_) b *= s;
  return *this;
}

MultiBandImage& MultiBandImage::axpy(double s, const MultiBandImage& other) {
  require(same_shape(other), ErrorCode::DimensionMismatch, "multi-band shapes differ");
  for (std::size_t p = 0; p < bands_.size(); ++p) bands_[p].axpy(s, other.bands_[p]);
  return *this;
}

double MultiBandImage::sum_squares() const {
  return reduce(bands_, 0.0, [](double a, const Image2D& b) { return a + b.sum_squares(); });
}

double MultiBandImage::l1_norm() const {
  return reduce(bands_, 0.0, [](double a, const Image2D& b) { return a + b.l1_norm(); });
}

double MultiBandImage::max_value() const {
  return reduce(bands_, -INFINITY,
                [](double a, const Image2D& b) { return std::max(a, b.max_value()); });
}

double MultiBandImage::min_value() const {
  return reduce(bands_, INFINITY,
                [](double a, const Image2D& b) { return std::min(a, b.min_value()); });
}

double MultiBandImage::max_abs() const {
  return reduce(bands_, 0.0, [](double a, const Image2D& b) { return std::max(a, b.max_abs()); });
}

MultiBandImage operator+(MultiBandImage a, const MultiBandImage& b) { return a += b; }
MultiBandImage operator-(MultiBandImage a, const MultiBandImage& b) { return a -= b; }
MultiBandImage operator*(double s, MultiBandImage a) { return a *= s; }

double dot(const MultiBandImage& a, const MultiBandImage& b) {
  require(a.same_shape(b), ErrorCode::DimensionMismatch, "multi-band shapes differ");
  double acc = 0.0;
  for (std::size_t p = 0; p < a.band_count(); ++p) acc += dot(a[p], b[p]);
  return acc;
}

ImageSeries::ImageSeries(std::vector<MultiBandImage> frames) : frames_(std::move(frames)) {
  require(!frames_.empty(), ErrorCode::BadShape, "a series needs at least one frame");
  for (const auto& f : frames_)
    require(f.same_shape(frames_[0]) && f.band_count() > 0, ErrorCode::DimensionMismatch,
            "all frames must share dimensions and band count");
}

bool ImageSeries::same_shape(const ImageSeries& other) const noexcept {
  return frame_count() == other.frame_count() &&
         (frames_.empty() || frames_[0].same_shape(other.frames_[0]));
}

ImageSeries& ImageSeries::operator+=(const ImageSeries& other) { return axpy(1.0, other); }

ImageSeries& ImageSeries::operator-=(const ImageSeries& other) { return axpy(-1.0, other); }

ImageSeries& ImageSeries::operator*=(double s) {
  for (auto& f : frames_) f *= s;
  return *this;
}

ImageSeries& ImageSeries::axpy(double s, const ImageSeries& other) {
  require(same_shape(other), ErrorCode::DimensionMismatch, "series shapes differ");
  for (std::size_t t = 0; t < frames_.size(); ++t) frames_[t].axpy(s, other.frames_[t]);
  return *this;
}

double ImageSeries::sum_squares() const {
  return reduce(frames_, 0.0,
                [](double a, const MultiBandImage& f) { return a + f.sum_squares(); });
}

double ImageSeries::l1_norm() const {
  return reduce(frames_, 0.0, [](double a, const MultiBandImage& f) { return a + f.l1_norm(); });
}

double ImageSeries::max_abs() const {
  return reduce(frames_, 0.0,
                [](double a, const MultiBandImage& f) { return std::max(a, f.max_abs()); });
}

ImageSeries ImageSeries::zeros_like() const {
  std::vector<MultiBandImage> frames;
  frames.reserve(frames_.size());
  for (const auto& f : frames_) frames.push_back(f.zeros_like());
  return ImageSeries(std::move(frames));
}

ImageSeries operator+(ImageSeries a, const ImageSeries& b) { return a += b; }
ImageSeries operator-(ImageSeries a, const ImageSeries& b) { return a -= b; }
ImageSeries operator*(double s, ImageSeries a) { return a *= s; }

Spectrum2D::Spectrum2D(std::size_t rows, std::size_t cols, Complex fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
  check_dims(rows, cols);
}

double Spectrum2D::sum_squares() const {
  return reduce(data_, 0.0, [](double a, Complex v) { return a + std::norm(v); });
}

double Spectrum2D::max_abs() const {
  return reduce(data_, 0.0, [](double a, Complex v) { return std::max(a, std::abs(v)); });
}

double bin_frequency(std::size_t k, std::size_t n) {
  const auto signed_k = static_cast<double>(k) - (2 * k > n ? static_cast<double>(n) : 0.0);
  return 2.0 * std::numbers::pi * signed_k / static_cast<double>(n);
}

}  // namespace rq
