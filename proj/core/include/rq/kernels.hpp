#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "rq/image.hpp"
#include "rq/lattice_sum.hpp"

namespace rq {

using Freq = std::array<double, 2>;

enum class AliasSum {
  Ewald,   // lattice sum to double precision (default)
  Direct,  // plain truncation to |m1|, |m2| <= M
};

struct KernelConfig {
  double gamma = 1.2;
  int riesz_order = 3;
  int scales = 3;
  int alias_radius = 3;
  double dc_epsilon = 1e-8;
  AliasSum alias_method = AliasSum::Ewald;

  // Throws InvalidArgument. With the Ewald sum gamma must exceed 1: for
  // gamma <= 1 the full alias sum of |omega|^{-2 gamma} over Z^2 diverges.
  void validate() const;
};

// 10/3 - (1/3)[4cos w1 + 4cos w2 + cos(w1+w2) + cos(w1-w2)]
double localization(Freq w);

// V(w)^{gamma/2} / |w|^gamma, and 1 for |w| <= dc_epsilon. Not periodic.
double bspline_hat(const KernelConfig& cfg, Freq w);
double bspline_hat(double gamma, double dc_epsilon, Freq w);

std::complex<double> riesz_hat(int l, int order, Freq w);

// D^i = 2^{i/2} Id for even i and 2^{(i-1)/2} [[1,1],[1,-1]] for odd i,
// stored row-major. D is symmetric, so D^{iT} = D^i.
std::array<int, 4> dyadic_power(int i);
Freq apply_dyadic(int i, Freq w);

// Scalar evaluators for every closed-form function in the construction. The
// periodic filters fold their argument; the spline and wavelet functions are
// continuous-frequency and take it as given.
class SplineFunctions {
 public:
  explicit SplineFunctions(const KernelConfig& cfg);

  const KernelConfig& config() const noexcept { return cfg_; }

  double bspline(Freq y) const;
  double bspline_dual(Freq y) const;
  double autocorrelation(Freq w) const;

  double refinement(Freq w) const;
  double refinement_dual(Freq w) const;
  std::complex<double> highpass(Freq w) const;
  std::complex<double> highpass_dual(Freq w) const;

  std::complex<double> wavelet(Freq y) const;
  std::complex<double> wavelet_dual(Freq y) const;

 private:
  double direct_alias_tail(Freq w) const;

  KernelConfig cfg_;
  std::optional<LatticeSum> lattice_;
};

// Alias sum A(w) = sum_m beta_{2 gamma}(2 pi m + w) on the n1 x n2 DFT grid.
Spectrum2D autocorrelation_hat(const KernelConfig& cfg, std::size_t n1, std::size_t n2);

struct QuincunxFilters {
  Spectrum2D refinement;       // H
  Spectrum2D refinement_dual;  // H~
  Spectrum2D highpass;         // G
  Spectrum2D highpass_dual;    // G~
  Spectrum2D autocorr;         // A(w)
  Spectrum2D autocorr_scaled;  // A(D^T w)
};

// Throws DegenerateDenominator when the spline vanishes at an off-DC bin.
QuincunxFilters quincunx_filters(const KernelConfig& cfg, std::size_t n1, std::size_t n2);

// Max over the grid of |A(Dw) - (|H(w)|^2 A(w) + |H(w+pi)|^2 A(w+pi)) / 2|.
double two_scale_residual(const QuincunxFilters& q);

struct FilterBank {
  KernelConfig config;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  std::uint64_t id = 0;
  Spectrum2D scaling_primal;
  Spectrum2D scaling_dual;
  // [scale i in 0..I][channel l in 0..L]
  std::vector<std::vector<Spectrum2D>> wavelet_primal;
  std::vector<std::vector<Spectrum2D>> wavelet_dual;
  std::vector<std::array<int, 4>> dyadic;
  std::size_t dc_folded_bins = 0;
  double unity_residual = 0.0;

  std::size_t scale_count() const noexcept { return wavelet_primal.size(); }
  std::size_t channel_count() const noexcept {
    return wavelet_primal.empty() ? 0 : wavelet_primal[0].size();
  }
};

// Primal/dual bank on the n1 x n2 grid with the scale-0 primal wavelet solved
// so that the unity condition holds exactly. Throws UnityViolation if the
// final residual exceeds 1e-9.
FilterBank build_filterbank(const KernelConfig& cfg, std::size_t n1, std::size_t n2);

// Max over the grid of |conj(phi~) phi + sum conj(psi~) psi - 1|.
double unity_residual(const FilterBank& bank);

std::uint64_t bank_fingerprint(const KernelConfig& cfg, std::size_t n1, std::size_t n2);

}  // namespace rq
