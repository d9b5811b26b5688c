#include "rq/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rq {

IterState initial_state(const MultiBandImage& f) { return IterState{f, f.zeros_like(), 0}; }

IterState k_map(const MultiBandImage& f, const IterState& state, double mu,
                const Smoother& smoother) {
  require(f.same_shape(state.u) && f.same_shape(state.lambda), ErrorCode::DimensionMismatch,
          "iteration state does not match the anchor image");
  IterState next;
  next.u = smoother.shrink(f + state.lambda, mu);
  require(next.u.same_shape(f), ErrorCode::DimensionMismatch,
          "smoother changed the image shape");
  next.lambda = state.lambda + f;
  next.lambda -= next.u;
  next.tau = state.tau + 1;
  return next;
}

MultiBandImage scheme2_denoise(const MultiBandImage& f, int N, double mu, const Smoother& smoother,
                               std::vector<double>* rel_changes) {
  require(N >= 1, ErrorCode::InvalidArgument, "scheme 2 needs at least one iteration");
  IterState state = initial_state(f);
  for (int t = 0; t < N; ++t) {
    IterState next = k_map(f, state, mu, smoother);
    if (rel_changes) {
      const double denom = std::sqrt(state.u.sum_squares());
      rel_changes->push_back(std::sqrt((next.u - state.u).sum_squares()) /
                             (denom > 0.0 ? denom : 1.0));
    }
    state = std::move(next);
  }
  return state.u;
}

DiffusionRecord diffuse(const MultiBandImage& f, int N, double mu, double beta,
                        const Smoother& smoother) {
  require(N >= 2, ErrorCode::InvalidArgument, "diffusion needs N >= 2");
  return diffuse_with<MultiBandImage>(
      f, N, beta, [&](const MultiBandImage& u) { return smoother.shrink(u, mu); });
}

FilterKind parse_filter_kind(const std::string& name) {
  if (name == "low" || name == "lowpass") return FilterKind::Lowpass;
  if (name == "high" || name == "highpass") return FilterKind::Highpass;
  if (name == "band" || name == "bandpass") return FilterKind::Bandpass;
  if (name == "stop" || name == "bandstop") return FilterKind::Bandstop;
  if (name == "all" || name == "allpass") return FilterKind::Allpass;
  fail(ErrorCode::InvalidArgument, "unknown spectral filter '" + name + "'");
}

double SpectralFilter::response(int t) const {
  const bool in_band = t >= tau1 && t < tau2;
  switch (kind) {
    case FilterKind::Lowpass: return t >= tau1 ? 1.0 : 0.0;
    case FilterKind::Highpass: return t < tau1 ? 1.0 : 0.0;
    case FilterKind::Bandpass: return in_band ? 1.0 : 0.0;
    case FilterKind::Bandstop: return in_band ? 0.0 : 1.0;
    case FilterKind::Allpass: return 1.0;
  }
  return 1.0;
}

void SpectralFilter::validate(int N) const {
  const bool two_sided = kind == FilterKind::Bandpass || kind == FilterKind::Bandstop;
  require(tau1 >= 0 && tau1 <= N, ErrorCode::BadThresholds, "tau1 must lie in [0, N]");
  if (two_sided)
    require(tau2 >= tau1 && tau2 <= N, ErrorCode::BadThresholds,
            "tau2 must lie in [tau1, N]");
}

std::vector<int> pick_thresholds(const std::vector<double>& spectrum, std::size_t count) {
  std::vector<int> jumps;
  for (std::size_t t = 0; t + 1 < spectrum.size(); ++t) jumps.push_back(static_cast<int>(t));
  // Spectrum index t holds S^(t+1); a jump after it gives threshold t + 2.
  std::stable_sort(jumps.begin(), jumps.end(), [&](int a, int b) {
    return std::abs(spectrum[a + 1] - spectrum[a]) > std::abs(spectrum[b + 1] - spectrum[b]);
  });
  jumps.resize(std::min(count, jumps.size()));
  std::vector<int> out;
  for (int j : jumps) out.push_back(j + 2);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace rq
