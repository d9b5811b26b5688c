#include <benchmark/benchmark.h>

#include "rq/synthetic.hpp"
#include "rq/vae.hpp"
#include "rq/vae_smooth.hpp"
#include "rq/vae_train.hpp"

namespace {

rq::VaeShape desk_shape() {
  rq::VaeShape s;
  s.bands = 3;
  s.rows = s.cols = 32;
  s.levels = 2;
  s.base_channels = 4;
  s.latent_dim = 16;
  return s;
}

void BM_ElboStep(benchmark::State& state) {
  const rq::VaeModel m = rq::make_vae(desk_shape(), 1);
  rq::Batch batch;
  for (std::uint64_t k = 0; k < 4; ++k) batch.push_back(rq::piecewise_constant_image(32, 32, 3, k));
  std::vector<Eigen::VectorXd> eps;
  for (std::uint64_t k = 0; k < 4; ++k) eps.push_back(rq::standard_normal(16, k));
  for (auto _ : state) {
    rq::VaeModel grad = m.zeros_like();
    benchmark::DoNotOptimize(rq::elbo_loss(m, batch, eps, &grad));
  }
}
BENCHMARK(BM_ElboStep)->Unit(benchmark::kMillisecond);

void BM_VaeSmooth(benchmark::State& state) {
  const rq::VaeModel m = rq::make_vae(desk_shape(), 2);
  rq::KernelConfig kc;
  kc.scales = 2;
  kc.riesz_order = 1;
  const rq::SkipBanks banks(kc);
  const rq::MultiBandImage f = rq::piecewise_constant_image(32, 32, 3, 9);
  banks.at(32, 32);
  banks.at(16, 16);
  for (auto _ : state) benchmark::DoNotOptimize(rq::vae_smooth(m, banks, f, 0.3, rq::ProxKind::SoftThreshold, 1));
}
BENCHMARK(BM_VaeSmooth)->Unit(benchmark::kMillisecond);

}  // namespace
