#include "rq/proximal.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rq/error.hpp"

namespace rq {

std::string_view prox_name(ProxKind kind) {
  switch (kind) {
    case ProxKind::SoftThreshold: return "soft";
    case ProxKind::HardThreshold: return "hard";
    case ProxKind::Relu: return "relu";
    case ProxKind::Identity: return "identity";
  }
  return "unknown";
}

ProxKind parse_prox(std::string_view name) {
  if (name == "soft") return ProxKind::SoftThreshold;
  if (name == "hard") return ProxKind::HardThreshold;
  if (name == "relu") return ProxKind::Relu;
  if (name == "identity") return ProxKind::Identity;
  fail(ErrorCode::InvalidArgument, "unknown prox rule '" + std::string(name) + "'");
}

ProximalRule::ProximalRule(ProxKind k, double mu) : kind(k), threshold(mu) {
  require(mu >= 0.0 && std::isfinite(mu), ErrorCode::InvalidArgument,
          "prox threshold must be finite and non-negative");
}

double ProximalRule::apply(double x) const {
  switch (kind) {
    case ProxKind::SoftThreshold: {
      const double m = std::abs(x) - threshold;
      return m > 0.0 ? std::copysign(m, x) : 0.0;
    }
    case ProxKind::HardThreshold: return std::abs(x) > threshold ? x : 0.0;
    case ProxKind::Relu: return x > 0.0 ? x : 0.0;
    case ProxKind::Identity: return x;
  }
  return x;
}

void prox_apply_inplace(const ProximalRule& rule, std::span<double> x) {
  if (rule.kind == ProxKind::Identity) return;
  for (double& v : x) v = rule.apply(v);
}

Image2D prox_apply(const ProximalRule& rule, Image2D x) {
  prox_apply_inplace(rule, x.values());
  return x;
}

MultiBandImage prox_apply(const ProximalRule& rule, MultiBandImage x) {
  for (std::size_t p = 0; p < x.band_count(); ++p) prox_apply_inplace(rule, x[p].values());
  return x;
}

double moreau_gradient(const ProximalRule& rule, double mu, double x) {
  require(mu != 0.0, ErrorCode::ZeroMu, "Moreau gradient needs mu > 0");
  return (x - rule.with_threshold(mu).apply(x)) / mu;
}

Image2D moreau_gradient(const ProximalRule& rule, double mu, const Image2D& x) {
  require(mu != 0.0, ErrorCode::ZeroMu, "Moreau gradient needs mu > 0");
  Image2D out = x;
  for (double& v : out.values()) v = moreau_gradient(rule, mu, v);
  return out;
}

double prox_penalty(const ProximalRule& rule, double mu, double u) {
  switch (rule.kind) {
    case ProxKind::SoftThreshold: return std::abs(u);
    case ProxKind::HardThreshold: return u != 0.0 ? mu / 2.0 : 0.0;
    case ProxKind::Relu: return u >= 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    case ProxKind::Identity: return 0.0;
  }
  return 0.0;
}

double moreau_envelope(const ProximalRule& rule, double mu, double x) {
  require(mu != 0.0, ErrorCode::ZeroMu, "Moreau envelope needs mu > 0");
  const double p = rule.with_threshold(mu).apply(x);
  return prox_penalty(rule, mu, p) + (p - x) * (p - x) / (2.0 * mu);
}

}  // namespace rq
