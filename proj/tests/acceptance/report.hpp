#pragma once

// One acceptance criterion: a title, a runtime budget and its sub-checks.

#include <cstdio>
#include <string>
#include <vector>

namespace acceptance {

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

class Criterion {
 public:
  Criterion(int id, std::string title, double budget_seconds)
      : id_(id), title_(std::move(title)), budget_(budget_seconds) {}

  void check(std::string name, bool pass, std::string detail) {
    checks_.push_back({std::move(name), pass, std::move(detail)});
  }

  int id() const { return id_; }
  const std::string& title() const { return title_; }
  double budget() const { return budget_; }
  const std::vector<Check>& checks() const { return checks_; }
  bool passed() const {
    if (checks_.empty()) return false;
    for (const auto& c : checks_)
      if (!c.pass) return false;
    return true;
  }

 private:
  int id_;
  std::string title_;
  double budget_;
  std::vector<Check> checks_;
};

// printf into a std::string.
template <typename... Args>
std::string fmt(const char* f, Args... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void unity_condition(Criterion& c);
void perfect_reconstruction(Criterion& c);
void hankel_algebra(Criterion& c);
void proximal_oracles(Criterion& c);
void diffusion_inverse(Criterion& c);
void denoising_property(Criterion& c);
void vae_math(Criterion& c);
void desk_training(Criterion& c);
void segmentation_robustness(Criterion& c);
void series_identities(Criterion& c);
void cli_determinism(Criterion& c);

}  // namespace acceptance
