#include "rq/kernels.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "rq/error.hpp"
#include "rq/parallel.hpp"

namespace rq {

namespace {

enum class SelfConjugate { RealPart, DominantAxis };

// Enforce S(-k) = conj(S(k)) exactly. Off the Nyquist lines this only removes
// rounding. Self-conjugate bins must be real: RealPart projects there, which
// zeroes odd Riesz orders at (pi, pi); DominantAxis keeps whichever of the
// real or imaginary part is larger, so the filter stays nonzero.
void hermitian_symmetrize(Spectrum2D& s, SelfConjugate rule) {
  const std::size_t n1 = s.rows(), n2 = s.cols();
  Spectrum2D out(n1, n2);
  for (std::size_t k1 = 0; k1 < n1; ++k1) {
    const std::size_t m1 = (n1 - k1) % n1;
    for (std::size_t k2 = 0; k2 < n2; ++k2) {
      const std::size_t m2 = (n2 - k2) % n2;
      if (k1 == m1 && k2 == m2 && rule == SelfConjugate::DominantAxis) {
        const Complex v = s(k1, k2);
        out(k1, k2) = std::abs(v.real()) >= std::abs(v.imag()) ? v.real() : v.imag();
      } else {
        out(k1, k2) = 0.5 * (s(k1, k2) + std::conj(s(m1, m2)));
      }
    }
  }
  s = std::move(out);
}

}  // namespace

std::uint64_t bank_fingerprint(const KernelConfig& cfg, std::size_t n1, std::size_t n2) {
  // FNV-1a over the fields that determine every filter value.
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const void* p, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 1099511628211ull;
    }
  };
  const std::uint64_t dims[2] = {n1, n2};
  const std::int64_t ints[4] = {cfg.riesz_order, cfg.scales, cfg.alias_radius,
                                static_cast<std::int64_t>(cfg.alias_method)};
  mix(&cfg.gamma, sizeof cfg.gamma);
  mix(&cfg.dc_epsilon, sizeof cfg.dc_epsilon);
  mix(ints, sizeof ints);
  mix(dims, sizeof dims);
  return h;
}

FilterBank build_filterbank(const KernelConfig& cfg, std::size_t n1, std::size_t n2) {
  require(n1 >= 4 && n2 >= 4, ErrorCode::BadShape, "filter bank grid must be at least 4x4");
  const SplineFunctions fns(cfg);
  const int I = cfg.scales, L = cfg.riesz_order;

  FilterBank bank;
  bank.config = cfg;
  bank.n1 = n1;
  bank.n2 = n2;
  bank.id = bank_fingerprint(cfg, n1, n2);
  for (int i = 0; i <= I; ++i) bank.dyadic.push_back(dyadic_power(i));

  // Non-subsampled normalization: the dual carries 2^{i/2} (unit noise gain
  // per scale, as in the decimated frame) and the primal 2^{-i/2}, so that
  // each primal/dual product equals the undecimated cascade term and the
  // scales telescope to conj(beta~) beta at scale 0.
  const double top = std::pow(2.0, I / 2.0);
  bank.scaling_primal = Spectrum2D(n1, n2);
  bank.scaling_dual = Spectrum2D(n1, n2);
  bank.wavelet_primal.assign(static_cast<std::size_t>(I + 1),
                             std::vector<Spectrum2D>(static_cast<std::size_t>(L + 1),
                                                     Spectrum2D(n1, n2)));
  bank.wavelet_dual = bank.wavelet_primal;

  // Per bin, psi_i and psi~_i at y = D^i w need A at x = D^{i-1} w, at D x and
  // at x + pi. A(D^i w) is shared between consecutive scales, so each bin
  // costs 2I + 2 lattice sums instead of one per filter and channel.
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  parallel_for(n1, [&](std::size_t k1) {
    for (std::size_t k2 = 0; k2 < n2; ++k2) {
      const std::size_t k = k1 * n2 + k2;
      const Freq w{bin_frequency(k1, n1), bin_frequency(k2, n2)};
      Freq x{(w[0] + w[1]) / 2.0, (w[0] - w[1]) / 2.0};
      double a_x = fns.autocorrelation(x);
      for (int i = 0; i <= I; ++i) {
        const Freq y = apply_dyadic(i, w);
        const Freq xs{x[0] + std::numbers::pi, x[1] + std::numbers::pi};
        const double a_y = fns.autocorrelation(y);
        const std::complex<double> phase = -std::polar(1.0, -x[0]) * fns.refinement(xs);
        const double b_x = fns.bspline(x);
        const std::complex<double> dual = phase / a_y * (b_x / a_x) * inv_sqrt2;
        const double amp = std::pow(2.0, i / 2.0);
        const std::complex<double> primal =
            i > 0 ? phase * fns.autocorrelation(xs) * b_x * inv_sqrt2 : 0.0;
        for (int l = 0; l <= L; ++l) {
          const std::complex<double> r = riesz_hat(l, L, y);
          bank.wavelet_dual[i][l][k] = amp * r * dual;
          if (i > 0) bank.wavelet_primal[i][l][k] = r * primal / amp;
        }
        if (i == I) {
          const double b_y = fns.bspline(y);
          bank.scaling_primal[k] = b_y / top;
          bank.scaling_dual[k] = b_y / a_y * top;
        }
        x = y;
        a_x = a_y;
      }
    }
  });
  hermitian_symmetrize(bank.scaling_primal, SelfConjugate::RealPart);
  hermitian_symmetrize(bank.scaling_dual, SelfConjugate::RealPart);
  for (int i = 0; i <= I; ++i) {
    for (int l = 0; l <= L; ++l) {
      hermitian_symmetrize(bank.wavelet_primal[i][l], SelfConjugate::RealPart);
      // The scale-0 dual is what the compensation divides by, so it keeps
      // its magnitude on self-conjugate bins.
      hermitian_symmetrize(bank.wavelet_dual[i][l],
                           i == 0 ? SelfConjugate::DominantAxis : SelfConjugate::RealPart);
    }
  }

  // Scale-0 compensation: solve the unity condition pointwise for psi_0.
  // Across channels the minimum-norm solution is psi_0l = psi~_0l r / E with
  // E = sum_l |psi~_0l|^2; where E is negligible the residual is folded into
  // another pair.
  const double eps = cfg.dc_epsilon;
  auto& psi0 = bank.wavelet_primal[0];
  psi0.assign(static_cast<std::size_t>(L + 1), Spectrum2D(n1, n2));
  for (std::size_t k = 0; k < n1 * n2; ++k) {
    Complex covered = std::conj(bank.scaling_dual[k]) * bank.scaling_primal[k];
    for (int i = 1; i <= I; ++i)
      for (int l = 0; l <= L; ++l)
        covered += std::conj(bank.wavelet_dual[i][l][k]) * bank.wavelet_primal[i][l][k];
    const Complex residual = 1.0 - covered;
    double energy = 0.0;
    for (int l = 0; l <= L; ++l) energy += std::norm(bank.wavelet_dual[0][l][k]);
    if (energy > eps * eps) {
      for (int l = 0; l <= L; ++l) psi0[l][k] = bank.wavelet_dual[0][l][k] * residual / energy;
    } else {
      // Fold into the filter pair whose dual is largest at this bin. That is
      // the scaling pair at DC; on self-conjugate Nyquist bins with odd Riesz
      // order, where the scaling dual may also vanish, it is a wavelet pair.
      Complex* primal = &bank.scaling_primal[k];
      Complex dual = bank.scaling_dual[k];
      for (int i = 1; i <= I; ++i) {
        for (int l = 0; l <= L; ++l) {
          if (std::abs(bank.wavelet_dual[i][l][k]) > std::abs(dual)) {
            dual = bank.wavelet_dual[i][l][k];
            primal = &bank.wavelet_primal[i][l][k];
          }
        }
      }
      require(std::abs(dual) > eps, ErrorCode::UnityViolation,
              "no dual filter is large enough to absorb the residual at bin " +
                  std::to_string(k));
      *primal += residual / std::conj(dual);
      ++bank.dc_folded_bins;
    }
  }

  bank.unity_residual = unity_residual(bank);
  require(bank.unity_residual <= 1e-9, ErrorCode::UnityViolation,
          "unity residual " + std::to_string(bank.unity_residual) + " exceeds 1e-9");
  return bank;
}

double unity_residual(const FilterBank& bank) {
  double worst = 0.0;
  for (std::size_t k = 0; k < bank.n1 * bank.n2; ++k) {
    Complex total = std::conj(bank.scaling_dual[k]) * bank.scaling_primal[k];
    for (std::size_t i = 0; i < bank.scale_count(); ++i)
      for (std::size_t l = 0; l < bank.channel_count(); ++l)
        total += std::conj(bank.wavelet_dual[i][l][k]) * bank.wavelet_primal[i][l][k];
    worst = std::max(worst, std::abs(total - 1.0));
  }
  return worst;
}

}  // namespace rq
