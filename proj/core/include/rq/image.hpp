#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace rq {

// Row-major real raster. Entries are finite by construction when built from
// data; element writes through operator() are unchecked for speed, so
// producers that may emit NaN should call validate_finite().
class Image2D {
 public:
  Image2D() = default;
  Image2D(std::size_t rows, std::size_t cols, double fill = 0.0);
  Image2D(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }
  const std::vector<double>& vector() const noexcept { return data_; }

  bool same_shape(const Image2D& other) const noexcept {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }
  void validate_finite() const;

  Image2D& operator+=(const Image2D& other);
  Image2D& operator-=(const Image2D& other);
  Image2D& operator*=(double s);
  // this += s * other
  Image2D& axpy(double s, const Image2D& other);

  double sum_squares() const;
  double l1_norm() const;
  double max_value() const;
  double min_value() const;
  double max_abs() const;

  bool operator==(const Image2D& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Image2D operator+(Image2D a, const Image2D& b);
Image2D operator-(Image2D a, const Image2D& b);
Image2D operator*(double s, Image2D a);
double dot(const Image2D& a, const Image2D& b);

class MultiBandImage {
 public:
  MultiBandImage() = default;
  MultiBandImage(std::size_t bands, std::size_t rows, std::size_t cols, double fill = 0.0);
  explicit MultiBandImage(std::vector<Image2D> bands);

  std::size_t band_count() const noexcept { return bands_.size(); }
  std::size_t rows() const noexcept { return bands_.empty() ? 0 : bands_[0].rows(); }
  std::size_t cols() const noexcept { return bands_.empty() ? 0 : bands_[0].cols(); }
  std::size_t size() const noexcept { return band_count() * rows() * cols(); }

  Image2D& band(std::size_t p) { return bands_[p]; }
  const Image2D& band(std::size_t p) const { return bands_[p]; }
  Image2D& operator[](std::size_t p) { return bands_[p]; }
  const Image2D& operator[](std::size_t p) const { return bands_[p]; }
  const std::vector<Image2D>& bands() const noexcept { return bands_; }

  bool same_shape(const MultiBandImage& other) const noexcept;
  void validate_finite() const;

  MultiBandImage& operator+=(const MultiBandImage& other);
  MultiBandImage& operator-=(const MultiBandImage& other);
  MultiBandImage& operator*=(double s);
  MultiBandImage& axpy(double s, const MultiBandImage& other);

  double sum_squares() const;
  double l1_norm() const;
  double max_value() const;
  double min_value() const;
  double max_abs() const;

  MultiBandImage zeros_like() const { return MultiBandImage(band_count(), rows(), cols()); }

  bool operator==(const MultiBandImage& other) const = default;

 private:
  std::vector<Image2D> bands_;
};

MultiBandImage operator+(MultiBandImage a, const MultiBandImage& b);
MultiBandImage operator-(MultiBandImage a, const MultiBandImage& b);
MultiBandImage operator*(double s, MultiBandImage a);
double dot(const MultiBandImage& a, const MultiBandImage& b);

class ImageSeries {
 public:
  ImageSeries() = default;
  explicit ImageSeries(std::vector<MultiBandImage> frames);

  std::size_t frame_count() const noexcept { return frames_.size(); }
  std::size_t band_count() const noexcept { return frames_.empty() ? 0 : frames_[0].band_count(); }
  std::size_t rows() const noexcept { return frames_.empty() ? 0 : frames_[0].rows(); }
  std::size_t cols() const noexcept { return frames_.empty() ? 0 : frames_[0].cols(); }

  MultiBandImage& frame(std::size_t t) { return frames_[t]; }
  const MultiBandImage& frame(std::size_t t) const { return frames_[t]; }
  MultiBandImage& operator[](std::size_t t) { return frames_[t]; }
  const MultiBandImage& operator[](std::size_t t) const { return frames_[t]; }
  const std::vector<MultiBandImage>& frames() const noexcept { return frames_; }

  bool same_shape(const ImageSeries& other) const noexcept;

  ImageSeries& operator+=(const ImageSeries& other);
  ImageSeries& operator-=(const ImageSeries& other);
  ImageSeries& operator*=(double s);
  ImageSeries& axpy(double s, const ImageSeries& other);

  double sum_squares() const;
  double l1_norm() const;
  double max_abs() const;

  ImageSeries zeros_like() const;

  bool operator==(const ImageSeries& other) const = default;

 private:
  std::vector<MultiBandImage> frames_;
};

ImageSeries operator+(ImageSeries a, const ImageSeries& b);
ImageSeries operator-(ImageSeries a, const ImageSeries& b);
ImageSeries operator*(double s, ImageSeries a);

using Complex = std::complex<double>;

// Complex values on the DFT grid; bin (k1, k2) sits at frequency
// (2*pi*k1/n1, 2*pi*k2/n2) folded into (-pi, pi].
class Spectrum2D {
 public:
  Spectrum2D() = default;
  Spectrum2D(std::size_t rows, std::size_t cols, Complex fill = {});

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  Complex operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  Complex& operator[](std::size_t i) { return data_[i]; }
  Complex operator[](std::size_t i) const { return data_[i]; }

  std::span<Complex> values() noexcept { return data_; }
  std::span<const Complex> values() const noexcept { return data_; }

  bool same_shape(const Spectrum2D& other) const noexcept {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }
  double sum_squares() const;
  double max_abs() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

// Frequency of DFT bin k on an axis of length n, folded into (-pi, pi].
double bin_frequency(std::size_t k, std::size_t n);

}  // namespace rq
