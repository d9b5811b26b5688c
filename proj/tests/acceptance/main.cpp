#include <chrono>
#include <cstdio>
#include <cstring>
#include <exception>
#include <cstdlib>

#include "report.hpp"

using acceptance::Criterion;

int main(int argc, char** argv) {
  struct Entry {
    int id;
    const char* title;
    double budget;
    void (*run)(Criterion&);
  };
  const Entry entries[] = {
      {1, "unity condition", 5, acceptance::unity_condition},
      {2, "perfect reconstruction", 10, acceptance::perfect_reconstruction},
      {3, "Hankel algebra", 30, acceptance::hankel_algebra},
      {4, "proximal oracles", 5, acceptance::proximal_oracles},
      {5, "diffusion exact inverse", 20, acceptance::diffusion_inverse},
      {6, "denoising property", 120, acceptance::denoising_property},
      {7, "VAE math", 60, acceptance::vae_math},
      {8, "desk-scale training", 300, acceptance::desk_training},
      {9, "segmentation robustness", 300, acceptance::segmentation_robustness},
      {10, "time-series identities", 30, acceptance::series_identities},
      {11, "CLI determinism", 300, acceptance::cli_determinism},
  };
  // Optional criterion numbers on the command line select a subset.
  auto selected = [&](int id) {
    if (argc < 2) return true;
    for (int k = 1; k < argc; ++k)
      if (std::atoi(argv[k]) == id) return true;
    return false;
  };

  int failed = 0, ran = 0;
  for (const Entry& e : entries) {
    if (!selected(e.id)) continue;
    Criterion c(e.id, e.title, e.budget);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      e.run(c);
    } catch (const std::exception& ex) {
      c.check("completed without error", false, ex.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.check("runtime", secs < e.budget, acceptance::fmt("%.1f s (budget %.0f s)", secs, e.budget));
    ++ran;
    if (!c.passed()) ++failed;
    std::printf("[%s] criterion %d: %s\n", c.passed() ? "PASS" : "FAIL", c.id(), c.title().c_str());
    for (const auto& s : c.checks())
      std::printf("    %s  %s: %s\n", s.pass ? "pass" : "FAIL", s.name.c_str(), s.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}
