#include <benchmark/benchmark.h>

#include <memory>
#include <random>

#include "rq/diffusion.hpp"
#include "rq/hankel.hpp"
#include "rq/kernels.hpp"
#include "rq/rq_transform.hpp"

namespace {

rq::MultiBandImage noise_image(std::size_t bands, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  rq::MultiBandImage f(bands, n, n);
  for (std::size_t p = 0; p < bands; ++p)
    for (std::size_t k = 0; k < n * n; ++k) f[p][k] = d(gen);
  return f;
}

void BM_BuildFilterBank(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const rq::KernelConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(rq::build_filterbank(cfg, n, n));
}
BENCHMARK(BM_BuildFilterBank)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_AnalyzeSynthesize(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const rq::FilterBank bank = rq::build_filterbank(rq::KernelConfig{}, n, n);
  const rq::MultiBandImage f = noise_image(3, n, 1);
  for (auto _ : state) benchmark::DoNotOptimize(rq::synthesize(rq::analyze(f, bank), bank));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(f.size()));
}
BENCHMARK(BM_AnalyzeSynthesize)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_Scheme2(benchmark::State& state) {
  auto bank = std::make_shared<const rq::FilterBank>(rq::build_filterbank(rq::KernelConfig{}, 64, 64));
  const rq::RqSmoother smoother(bank, rq::ProxKind::SoftThreshold);
  const rq::MultiBandImage f = noise_image(3, 64, 2);
  for (auto _ : state) benchmark::DoNotOptimize(rq::scheme2_denoise(f, 10, 0.02, smoother));
}
BENCHMARK(BM_Scheme2)->Unit(benchmark::kMillisecond);

void BM_ConvIso(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const rq::MultiBandImage f = noise_image(8, n, 3);
  rq::KernelFamily k(16, 8, 3, 3, 1, 1);
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> d(-0.3, 0.3);
  for (double& w : k.weights) w = d(gen);
  for (auto _ : state) benchmark::DoNotOptimize(rq::conv_iso(f, k));
}
BENCHMARK(BM_ConvIso)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace
