#pragma once

#include <span>
#include <string_view>

#include "rq/image.hpp"

namespace rq {

enum class ProxKind { SoftThreshold, HardThreshold, Relu, Identity };

std::string_view prox_name(ProxKind kind);
ProxKind parse_prox(std::string_view name);  // "soft", "hard", "relu", "identity"

struct ProximalRule {
  ProxKind kind = ProxKind::SoftThreshold;
  double threshold = 0.0;

  ProximalRule() = default;
  ProximalRule(ProxKind k, double mu);

  ProximalRule with_threshold(double mu) const { return ProximalRule(kind, mu); }
  double apply(double x) const;
};

void prox_apply_inplace(const ProximalRule& rule, std::span<double> x);
Image2D prox_apply(const ProximalRule& rule, Image2D x);
MultiBandImage prox_apply(const ProximalRule& rule, MultiBandImage x);

// (x - prox(x)) / mu, with the thresholding rules evaluated at threshold mu.
// Throws ZeroMu when mu == 0.
double moreau_gradient(const ProximalRule& rule, double mu, double x);
Image2D moreau_gradient(const ProximalRule& rule, double mu, const Image2D& x);

// Penalty whose prox with parameter mu is the rule:
//   soft: |u|, hard: (mu/2) [u != 0], relu: indicator of u >= 0, identity: 0.
double prox_penalty(const ProximalRule& rule, double mu, double u);

// Moreau-Yosida envelope min_u P(u) + (u - x)^2 / (2 mu), attained at prox(x).
double moreau_envelope(const ProximalRule& rule, double mu, double x);

}  // namespace rq
