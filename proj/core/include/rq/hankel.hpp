#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "rq/image.hpp"
#include "rq/kernels.hpp"

namespace rq {

using Matrix = Eigen::MatrixXd;

Matrix to_matrix(const Image2D& img);
Image2D to_image(const Matrix& m);

// Periodic extended Hankel lift of an n1 x n2 image: an n1 x (n2 d1) matrix
// whose entry (k, i d1 + j) is f[(k + j - origin) mod n1, i]. origin = 0 is
// the textbook lift; a centered origin gives the patches of a "same"
// convolution.
struct HankelLift {
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  std::size_t d1 = 0;
  std::size_t origin = 0;
  Matrix data;
};

HankelLift hankel_lift(const Image2D& f, std::size_t d1, std::size_t origin = 0);

// Least-squares inverse: averages the d1 copies of each pixel. Exact on valid
// lifts; for an arbitrary matrix it is the orthogonal projection onto lifts
// followed by unlifting.
Image2D hankel_pinv(const HankelLift& lift);
Image2D hankel_pinv(const Matrix& g, std::size_t n2, std::size_t d1, std::size_t origin = 0);

// (n2 d1) x n2 filter matrix of a d1 x d2 kernel: row i d1 + j, column c
// holds kernel[j, (i - c + origin2) mod n2] when that index is below d2.
Matrix filter_matrix(const Matrix& kernel, std::size_t n2, std::size_t origin2 = 0);

// H(f) Phi: out[r1, r2] = sum_{a,b} f[r1 + a - o1, r2 + b - o2] kernel[a, b]
// (periodic). The output keeps the image size n1 x n2.
Image2D conv2_via_hankel(const Image2D& f, const Matrix& kernel, std::size_t origin1 = 0,
                         std::size_t origin2 = 0);

std::vector<Image2D> conv_family(const Image2D& f, const std::vector<Matrix>& kernels);

// Adjoint of conv_family with respect to the Frobenius inner product: a sum
// of correlations with the time-reversed kernels.
Image2D conv_family_adjoint(const std::vector<Image2D>& planes, const std::vector<Matrix>& kernels);

// Q x P family of d1 x d2 kernels sharing one origin, stored [q][p][a][b].
struct KernelFamily {
  std::size_t out_channels = 0;
  std::size_t in_channels = 0;
  std::size_t d1 = 0;
  std::size_t d2 = 0;
  std::size_t origin1 = 0;
  std::size_t origin2 = 0;
  std::vector<double> weights;

  KernelFamily() = default;
  KernelFamily(std::size_t q, std::size_t p, std::size_t d1, std::size_t d2, std::size_t o1,
               std::size_t o2);

  double& at(std::size_t q, std::size_t p, std::size_t a, std::size_t b) {
    return weights[((q * in_channels + p) * d1 + a) * d2 + b];
  }
  double at(std::size_t q, std::size_t p, std::size_t a, std::size_t b) const {
    return weights[((q * in_channels + p) * d1 + a) * d2 + b];
  }
  Matrix kernel(std::size_t q, std::size_t p) const;
};

// out_q = sum_p H(f_p) Theta_{q,p}. The filter matrices are banded, so the
// product is evaluated over the band only, which is the direct double sum.
MultiBandImage conv_iso(const MultiBandImage& f, const KernelFamily& kernels);

// Adjoint in the input: in_p = sum_q C*_{theta_{q,p}}(g_q).
MultiBandImage conv_iso_adjoint(const MultiBandImage& g, const KernelFamily& kernels);

// Gradient of <g, conv_iso(f, theta)> with respect to theta.
KernelFamily conv_iso_kernel_grad(const MultiBandImage& f, const MultiBandImage& g,
                                  const KernelFamily& shape);

struct FrameletBases {
  Matrix local_primal;   // Xi, n1 x d
  Matrix local_dual;     // Xi~, n1 x d
  Matrix filter_primal;  // Phi, (n2 d1) x d2
  Matrix filter_dual;    // Phi~, (n2 d1) x d2
  std::size_t d1 = 0;

  // max(|Xi~ Xi^T - Id|, |Phi Phi~^T - Id|)
  double unity_residual() const;
};

// c = Xi^T H(f) Phi. Throws UnityViolation if the bases miss unity by 1e-8.
Matrix framelet_decompose(const Image2D& f, const FrameletBases& bases);

// f = H^dagger(Xi~ c Phi~^T).
Image2D framelet_reconstruct(const Matrix& coeffs, const FrameletBases& bases, std::size_t n1,
                             std::size_t n2);

// Spatial view of an RQ bank: every analysis/synthesis pair as full-size
// n1 x n2 kernels (scaling first, then scale-major wavelets).
struct SpatialBank {
  std::vector<Matrix> analysis;   // idft2 of the dual filters
  std::vector<Matrix> synthesis;  // idft2 of the primal filters
};

SpatialBank spatial_bank(const FilterBank& bank);

// f = sum_p H(H(f) Psi~_p) Psi_p evaluated entirely through Hankel products.
Image2D rq_spatial_roundtrip(const Image2D& f, const SpatialBank& bank);

// Sum_p Psi~_p Psi_p^T with d1 = n1, d2 = n2: the (n2 n1) x (n2 n1) matrix
// that the literal matrix-unity statement compares with Id / n1.
Matrix rq_unity_matrix(const SpatialBank& bank, std::size_t n1, std::size_t n2);

// n1 H^dagger(H(f) M) for the matrix above; equals f when M acts as the
// identity on the range of the lift.
Image2D apply_unity_matrix(const Image2D& f, const Matrix& m);

}  // namespace rq
