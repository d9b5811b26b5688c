#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "rq/error.hpp"
#include "rq/image.hpp"
#include "rq/rq_transform.hpp"

namespace rq {

struct IterState {
  MultiBandImage u;
  MultiBandImage lambda;
  int tau = 0;
};

// u = f, lambda = 0, tau = 0.
IterState initial_state(const MultiBandImage& f);

// One augmented-Lagrangian step anchored at f:
//   u' = smoother.shrink(f + lambda, mu),  lambda' = lambda + f - u'.
IterState k_map(const MultiBandImage& f, const IterState& state, double mu,
                const Smoother& smoother);

// N steps of k_map from the initial state; returns u^(N). When rel_changes is
// given it receives |u^(t) - u^(t-1)| / |u^(t-1)| for t = 1..N.
MultiBandImage scheme2_denoise(const MultiBandImage& f, int N, double mu, const Smoother& smoother,
                               std::vector<double>* rel_changes = nullptr);

// Scale-space record of a self-anchored iteration u^(t) = step(u^(t-1)),
// u^(0) = f, kept for t = 0..N+1. Works for any state with vector-space
// operations and an l1 norm (images and image series).
template <typename State>
struct DiffusionRecordT {
  std::vector<State> states;    // u^(0..N+1)
  std::vector<State> bands;     // phi^(1..N), bands[t - 1] = phi^(t)
  std::vector<double> spectrum; // S^(1..N)
  double beta = 1.0;

  int iterations() const { return static_cast<int>(bands.size()); }

  // (1 + N) u^(N) - N u^(N+1)
  State residual_term() const {
    const int N = iterations();
    State out = states[static_cast<std::size_t>(N)];
    out *= 1.0 + N;
    out.axpy(-static_cast<double>(N), states[static_cast<std::size_t>(N) + 1]);
    return out;
  }
};

template <typename State>
DiffusionRecordT<State> diffuse_with(const State& f, int N, double beta,
                                     const std::function<State(const State&)>& step) {
  require(N >= 1, ErrorCode::InvalidArgument, "diffusion needs at least one band");
  require(beta > 0.0, ErrorCode::InvalidArgument, "beta must be positive");
  DiffusionRecordT<State> rec;
  rec.beta = beta;
  rec.states.reserve(static_cast<std::size_t>(N) + 2);
  rec.states.push_back(f);
  for (int t = 1; t <= N + 1; ++t) rec.states.push_back(step(rec.states.back()));
  for (int t = 1; t <= N; ++t) {
    const auto k = static_cast<std::size_t>(t);
    // phi^(t) = (t / beta)(u^(t+1) - 2 u^(t) + u^(t-1))
    State phi = rec.states[k + 1];
    phi.axpy(-2.0, rec.states[k]);
    phi += rec.states[k - 1];
    phi *= t / beta;
    rec.spectrum.push_back(phi.l1_norm());
    rec.bands.push_back(std::move(phi));
  }
  return rec;
}

using DiffusionRecord = DiffusionRecordT<MultiBandImage>;

// Nonlinear scale space u^(t) = smoother.shrink(u^(t-1), mu). The multiplier
// of k_map is not carried between steps: with the previous iterate as anchor
// it telescopes to lambda^(t+1) = f - u^(t), which pins every later iterate
// to shrink(f) and makes all bands beyond the first vanish.
DiffusionRecord diffuse(const MultiBandImage& f, int N, double mu, double beta,
                        const Smoother& smoother);

enum class FilterKind { Lowpass, Highpass, Bandpass, Bandstop, Allpass };

FilterKind parse_filter_kind(const std::string& name);  // low, high, band, stop, all

struct SpectralFilter {
  FilterKind kind = FilterKind::Allpass;
  int tau1 = 0;
  int tau2 = 0;

  // Indicator H^(t). lowpass: t >= tau1; highpass: t < tau1;
  // bandpass: tau1 <= t < tau2; bandstop: the complement of bandpass.
  double response(int t) const;
  void validate(int N) const;  // throws BadThresholds
};

// H^(N) f~ + beta sum_t H^(t) phi^(t)
template <typename State>
State spectral_filter(const DiffusionRecordT<State>& rec, const SpectralFilter& filt) {
  const int N = rec.iterations();
  filt.validate(N);
  State out = rec.residual_term();
  out *= filt.response(N);
  for (int t = 1; t <= N; ++t) {
    const double h = filt.response(t);
    if (h != 0.0) out.axpy(rec.beta * h, rec.bands[static_cast<std::size_t>(t) - 1]);
  }
  return out;
}

// Thresholds at the `count` largest jumps |S^(t+1) - S^(t)|; a jump between t
// and t + 1 yields threshold t + 1. Returned in increasing order.
std::vector<int> pick_thresholds(const std::vector<double>& spectrum, std::size_t count);

}  // namespace rq
