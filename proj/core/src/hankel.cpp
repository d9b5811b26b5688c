#include "rq/hankel.hpp"

#include <cmath>
#include <string>

#include "rq/error.hpp"
#include "rq/fft.hpp"

namespace rq {

namespace {

std::size_t wrap(std::ptrdiff_t v, std::size_t n) {
  const auto m = static_cast<std::ptrdiff_t>(n);
  return static_cast<std::size_t>(((v % m) + m) % m);
}

// out[r1, r2] += w * in[(r1 + s1) mod n1, (r2 + s2) mod n2]
void add_shifted(Image2D& out, const Image2D& in, double w, std::ptrdiff_t s1,
                 std::ptrdiff_t s2) {
  const std::size_t n1 = in.rows(), n2 = in.cols();
  const std::size_t c0 = wrap(s2, n2);
  const double* src = in.values().data();
  double* dst = out.values().data();
  for (std::size_t r1 = 0; r1 < n1; ++r1) {
    const double* row = src + wrap(static_cast<std::ptrdiff_t>(r1) + s1, n1) * n2;
    double* o = dst + r1 * n2;
    const std::size_t first = n2 - c0;
    for (std::size_t r2 = 0; r2 < first; ++r2) o[r2] += w * row[c0 + r2];
    for (std::size_t r2 = first; r2 < n2; ++r2) o[r2] += w * row[r2 - first];
  }
}

// sum_r g[r] in[(r + s) mod n]
double dot_shifted(const Image2D& g, const Image2D& in, std::ptrdiff_t s1, std::ptrdiff_t s2) {
  const std::size_t n1 = in.rows(), n2 = in.cols();
  const std::size_t c0 = wrap(s2, n2);
  const double* src = in.values().data();
  const double* gv = g.values().data();
  double acc = 0.0;
  for (std::size_t r1 = 0; r1 < n1; ++r1) {
    const double* row = src + wrap(static_cast<std::ptrdiff_t>(r1) + s1, n1) * n2;
    const double* gr = gv + r1 * n2;
    const std::size_t first = n2 - c0;
    for (std::size_t r2 = 0; r2 < first; ++r2) acc += gr[r2] * row[c0 + r2];
    for (std::size_t r2 = first; r2 < n2; ++r2) acc += gr[r2] * row[r2 - first];
  }
  return acc;
}

Matrix flipped(const Matrix& k) { return k.reverse(); }

void check_kernel(const Image2D& f, const Matrix& kernel, std::size_t o1, std::size_t o2) {
  require(kernel.rows() >= 1 && kernel.cols() >= 1 &&
              static_cast<std::size_t>(kernel.rows()) <= f.rows() &&
              static_cast<std::size_t>(kernel.cols()) <= f.cols(),
          ErrorCode::BadPatchSize, "kernel must be non-empty and no larger than the image");
  require(o1 < static_cast<std::size_t>(kernel.rows()) &&
              o2 < static_cast<std::size_t>(kernel.cols()),
          ErrorCode::BadPatchSize, "kernel origin lies outside the kernel");
}

}  // namespace

Matrix to_matrix(const Image2D& img) {
  Matrix m(img.rows(), img.cols());
  for (std::size_t r = 0; r < img.rows(); ++r)
    for (std::size_t c = 0; c < img.cols(); ++c) m(r, c) = img(r, c);
  return m;
}

Image2D to_image(const Matrix& m) {
  Image2D img(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  for (std::size_t r = 0; r < img.rows(); ++r)
    for (std::size_t c = 0; c < img.cols(); ++c) img(r, c) = m(r, c);
  return img;
}

HankelLift hankel_lift(const Image2D& f, std::size_t d1, std::size_t origin) {
  const std::size_t n1 = f.rows(), n2 = f.cols();
  require(d1 >= 1 && d1 <= n1, ErrorCode::BadPatchSize,
          "patch width " + std::to_string(d1) + " outside [1, " + std::to_string(n1) + "]");
  require(origin < d1, ErrorCode::BadPatchSize, "lift origin must be below the patch width");
  HankelLift lift{n1, n2, d1, origin, Matrix(n1, n2 * d1)};
  for (std::size_t k = 0; k < n1; ++k)
    for (std::size_t i = 0; i < n2; ++i)
      for (std::size_t j = 0; j < d1; ++j)
        lift.data(k, i * d1 + j) =
            f(wrap(static_cast<std::ptrdiff_t>(k + j) - static_cast<std::ptrdiff_t>(origin), n1), i);
  return lift;
}

Image2D hankel_pinv(const Matrix& g, std::size_t n2, std::size_t d1, std::size_t origin) {
  require(d1 >= 1 && origin < d1 && g.cols() == static_cast<Eigen::Index>(n2 * d1) && g.rows() >= 1,
          ErrorCode::ShapeMismatch, "matrix shape is not n1 x (n2 d1)");
  const std::size_t n1 = static_cast<std::size_t>(g.rows());
  require(d1 <= n1, ErrorCode::ShapeMismatch, "patch width exceeds the row count");
  Image2D f(n1, n2);
  const double scale = 1.0 / static_cast<double>(d1);
  for (std::size_t k = 0; k < n1; ++k) {
    for (std::size_t i = 0; i < n2; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < d1; ++j) {
        const std::size_t row =
            wrap(static_cast<std::ptrdiff_t>(k + origin) - static_cast<std::ptrdiff_t>(j), n1);
        acc += g(row, i * d1 + j);
      }
      f(k, i) = acc * scale;
    }
  }
  return f;
}

Image2D hankel_pinv(const HankelLift& lift) {
  require(lift.data.rows() == static_cast<Eigen::Index>(lift.n1), ErrorCode::ShapeMismatch,
          "lift data does not match its declared shape");
  return hankel_pinv(lift.data, lift.n2, lift.d1, lift.origin);
}

Matrix filter_matrix(const Matrix& kernel, std::size_t n2, std::size_t origin2) {
  const auto d1 = static_cast<std::size_t>(kernel.rows());
  const auto d2 = static_cast<std::size_t>(kernel.cols());
  require(d2 <= n2 && d1 >= 1 && d2 >= 1, ErrorCode::BadPatchSize,
          "kernel width exceeds the image width");
  Matrix phi = Matrix::Zero(static_cast<Eigen::Index>(n2 * d1), static_cast<Eigen::Index>(n2));
  for (std::size_t i = 0; i < n2; ++i)
    for (std::size_t c = 0; c < n2; ++c) {
      const std::size_t b =
          wrap(static_cast<std::ptrdiff_t>(i + origin2) - static_cast<std::ptrdiff_t>(c), n2);
      if (b >= d2) continue;
      for (std::size_t j = 0; j < d1; ++j) phi(i * d1 + j, c) = kernel(j, b);
    }
  return phi;
}

Image2D conv2_via_hankel(const Image2D& f, const Matrix& kernel, std::size_t origin1,
                         std::size_t origin2) {
  check_kernel(f, kernel, origin1, origin2);
  const HankelLift lift = hankel_lift(f, static_cast<std::size_t>(kernel.rows()), origin1);
  return to_image(lift.data * filter_matrix(kernel, f.cols(), origin2));
}

std::vector<Image2D> conv_family(const Image2D& f, const std::vector<Matrix>& kernels) {
  std::vector<Image2D> out;
  out.reserve(kernels.size());
  for (const auto& k : kernels) out.push_back(conv2_via_hankel(f, k));
  return out;
}

Image2D conv_family_adjoint(const std::vector<Image2D>& planes,
                            const std::vector<Matrix>& kernels) {
  require(planes.size() == kernels.size() && !planes.empty(), ErrorCode::BandCountMismatch,
          "one plane per kernel is required");
  Image2D out(planes[0].rows(), planes[0].cols());
  for (std::size_t q = 0; q < planes.size(); ++q) {
    const Matrix& k = kernels[q];
    out += conv2_via_hankel(planes[q], flipped(k), static_cast<std::size_t>(k.rows()) - 1,
                            static_cast<std::size_t>(k.cols()) - 1);
  }
  return out;
}

KernelFamily::KernelFamily(std::size_t q, std::size_t p, std::size_t d1_, std::size_t d2_,
                           std::size_t o1, std::size_t o2)
    : out_channels(q), in_channels(p), d1(d1_), d2(d2_), origin1(o1), origin2(o2),
      weights(q * p * d1_ * d2_, 0.0) {
  require(q >= 1 && p >= 1 && d1_ >= 1 && d2_ >= 1, ErrorCode::BadPatchSize,
          "kernel family dimensions must be positive");
  require(o1 < d1_ && o2 < d2_, ErrorCode::BadPatchSize, "kernel origin lies outside the kernel");
}

Matrix KernelFamily::kernel(std::size_t q, std::size_t p) const {
  Matrix k(static_cast<Eigen::Index>(d1), static_cast<Eigen::Index>(d2));
  for (std::size_t a = 0; a < d1; ++a)
    for (std::size_t b = 0; b < d2; ++b) k(a, b) = at(q, p, a, b);
  return k;
}

MultiBandImage conv_iso(const MultiBandImage& f, const KernelFamily& kernels) {
  require(f.band_count() == kernels.in_channels, ErrorCode::BandCountMismatch,
          "input bands differ from the kernel family's input channels");
  require(kernels.d1 <= f.rows() && kernels.d2 <= f.cols(), ErrorCode::BadPatchSize,
          "kernel larger than the image");
  MultiBandImage out(kernels.out_channels, f.rows(), f.cols());
  const auto o1 = static_cast<std::ptrdiff_t>(kernels.origin1);
  const auto o2 = static_cast<std::ptrdiff_t>(kernels.origin2);
  for (std::size_t q = 0; q < kernels.out_channels; ++q)
    for (std::size_t p = 0; p < kernels.in_channels; ++p)
      for (std::size_t a = 0; a < kernels.d1; ++a)
        for (std::size_t b = 0; b < kernels.d2; ++b) {
          const double w = kernels.at(q, p, a, b);
          if (w != 0.0)
            add_shifted(out[q], f[p], w, static_cast<std::ptrdiff_t>(a) - o1,
                        static_cast<std::ptrdiff_t>(b) - o2);
        }
  return out;
}

MultiBandImage conv_iso_adjoint(const MultiBandImage& g, const KernelFamily& kernels) {
  require(g.band_count() == kernels.out_channels, ErrorCode::BandCountMismatch,
          "gradient bands differ from the kernel family's output channels");
  MultiBandImage out(kernels.in_channels, g.rows(), g.cols());
  const auto o1 = static_cast<std::ptrdiff_t>(kernels.origin1);
  const auto o2 = static_cast<std::ptrdiff_t>(kernels.origin2);
  for (std::size_t q = 0; q < kernels.out_channels; ++q)
    for (std::size_t p = 0; p < kernels.in_channels; ++p)
      for (std::size_t a = 0; a < kernels.d1; ++a)
        for (std::size_t b = 0; b < kernels.d2; ++b) {
          const double w = kernels.at(q, p, a, b);
          if (w != 0.0)
            add_shifted(out[p], g[q], w, o1 - static_cast<std::ptrdiff_t>(a),
                        o2 - static_cast<std::ptrdiff_t>(b));
        }
  return out;
}

KernelFamily conv_iso_kernel_grad(const MultiBandImage& f, const MultiBandImage& g,
                                  const KernelFamily& shape) {
  require(f.band_count() == shape.in_channels && g.band_count() == shape.out_channels,
          ErrorCode::BandCountMismatch, "band counts do not match the kernel family");
  KernelFamily grad(shape.out_channels, shape.in_channels, shape.d1, shape.d2, shape.origin1,
                    shape.origin2);
  const auto o1 = static_cast<std::ptrdiff_t>(shape.origin1);
  const auto o2 = static_cast<std::ptrdiff_t>(shape.origin2);
  for (std::size_t q = 0; q < shape.out_channels; ++q)
    for (std::size_t p = 0; p < shape.in_channels; ++p)
      for (std::size_t a = 0; a < shape.d1; ++a)
        for (std::size_t b = 0; b < shape.d2; ++b)
          grad.at(q, p, a, b) = dot_shifted(g[q], f[p], static_cast<std::ptrdiff_t>(a) - o1,
                                            static_cast<std::ptrdiff_t>(b) - o2);
  return grad;
}

double FrameletBases::unity_residual() const {
  const Matrix local = local_dual * local_primal.transpose();
  const Matrix filt = filter_primal * filter_dual.transpose();
  const double a = (local - Matrix::Identity(local.rows(), local.cols())).cwiseAbs().maxCoeff();
  const double b = (filt - Matrix::Identity(filt.rows(), filt.cols())).cwiseAbs().maxCoeff();
  return std::max(a, b);
}

Matrix framelet_decompose(const Image2D& f, const FrameletBases& bases) {
  require(bases.local_primal.rows() == static_cast<Eigen::Index>(f.rows()) &&
              bases.filter_primal.rows() == static_cast<Eigen::Index>(f.cols() * bases.d1),
          ErrorCode::ShapeMismatch, "bases do not match the image and patch size");
  require(bases.local_dual.rows() == bases.local_primal.rows() &&
              bases.local_dual.cols() == bases.local_primal.cols() &&
              bases.filter_dual.rows() == bases.filter_primal.rows() &&
              bases.filter_dual.cols() == bases.filter_primal.cols(),
          ErrorCode::ShapeMismatch, "primal and dual bases differ in shape");
  const double residual = bases.unity_residual();
  require(residual <= 1e-8, ErrorCode::UnityViolation,
          "framelet bases miss the unity condition by " + std::to_string(residual));
  const HankelLift lift = hankel_lift(f, bases.d1);
  return bases.local_primal.transpose() * lift.data * bases.filter_primal;
}

Image2D framelet_reconstruct(const Matrix& coeffs, const FrameletBases& bases, std::size_t n1,
                             std::size_t n2) {
  require(coeffs.rows() == bases.local_dual.cols() && coeffs.cols() == bases.filter_dual.cols() &&
              bases.local_dual.rows() == static_cast<Eigen::Index>(n1) &&
              bases.filter_dual.rows() == static_cast<Eigen::Index>(n2 * bases.d1),
          ErrorCode::ShapeMismatch, "coefficient or basis shapes are inconsistent");
  const Matrix g = bases.local_dual * coeffs * bases.filter_dual.transpose();
  return hankel_pinv(g, n2, bases.d1);
}

SpatialBank spatial_bank(const FilterBank& bank) {
  SpatialBank out;
  auto add = [&](const Spectrum2D& dual, const Spectrum2D& primal) {
    out.analysis.push_back(to_matrix(idft2(dual)));
    out.synthesis.push_back(to_matrix(idft2(primal)));
  };
  add(bank.scaling_dual, bank.scaling_primal);
  for (std::size_t i = 0; i < bank.scale_count(); ++i)
    for (std::size_t l = 0; l < bank.channel_count(); ++l)
      add(bank.wavelet_dual[i][l], bank.wavelet_primal[i][l]);
  return out;
}

Image2D rq_spatial_roundtrip(const Image2D& f, const SpatialBank& bank) {
  Image2D out(f.rows(), f.cols());
  for (std::size_t p = 0; p < bank.analysis.size(); ++p) {
    const Image2D coeff = conv2_via_hankel(f, bank.analysis[p]);
    // Synthesis convolves with psi, i.e. correlates with the reversed kernel
    // psi[-a]; with origin n - 1 the flipped matrix realizes exactly that.
    const Matrix& psi = bank.synthesis[p];
    out += conv2_via_hankel(coeff, flipped(psi), static_cast<std::size_t>(psi.rows()) - 1,
                            static_cast<std::size_t>(psi.cols()) - 1);
  }
  return out;
}

Matrix rq_unity_matrix(const SpatialBank& bank, std::size_t n1, std::size_t n2) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(n1 * n2), static_cast<Eigen::Index>(n1 * n2));
  for (std::size_t p = 0; p < bank.analysis.size(); ++p)
    m += filter_matrix(bank.analysis[p], n2) * filter_matrix(bank.synthesis[p], n2).transpose();
  return m;
}

Image2D apply_unity_matrix(const Image2D& f, const Matrix& m) {
  const HankelLift lift = hankel_lift(f, f.rows());
  Image2D out = hankel_pinv(lift.data * m, f.cols(), f.rows());
  out *= static_cast<double>(f.rows());
  return out;
}

}  // namespace rq
