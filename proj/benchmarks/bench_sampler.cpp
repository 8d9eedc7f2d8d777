#include <benchmark/benchmark.h>

#include "skewflect/metrics.hpp"
#include "skewflect/sampler.hpp"
#include "skewflect/skew_field.hpp"

namespace {

using namespace skewflect;

SamplerConfig toy_config(Method method) {
  SamplerConfig cfg;
  cfg.body = ConvexBody::ball(Vec::Zero(3), 1.0);
  cfg.field = SkewField::tridiagonal(3, 1.0);
  cfg.potential = Potential::gaussian_standard(3);
  cfg.eta = 1e-4;
  cfg.iterations = 1;
  cfg.chains = 1;
  Vec x0(3);
  x0 << 0.3, 0.6, -0.4;
  cfg.initial = x0;
  cfg.method = method;
  cfg.workers = 1;
  return cfg;
}

void BM_SrnlmcStep(benchmark::State& state) {
  const SamplerConfig cfg = toy_config(Method::SkewReflected);
  CounterRng rng(7, 0);
  Vec x = *cfg.initial, xi(3);
  for (auto _ : state) {
    for (int i = 0; i < 3; ++i) xi[i] = rng.normal();
    auto r = srnlmc_step(cfg, x, xi);
    benchmark::DoNotOptimize(r.x_next);
    x = std::move(r.x_next);
  }
}
BENCHMARK(BM_SrnlmcStep);

void BM_PlmcStep(benchmark::State& state) {
  const SamplerConfig cfg = toy_config(Method::ProjectedBaseline);
  CounterRng rng(7, 0);
  Vec x = *cfg.initial, xi(3);
  for (auto _ : state) {
    for (int i = 0; i < 3; ++i) xi[i] = rng.normal();
    auto r = plmc_step(cfg, x, xi);
    benchmark::DoNotOptimize(r.x_next);
    x = std::move(r.x_next);
  }
}
BENCHMARK(BM_PlmcStep);

void BM_SkewProject(benchmark::State& state) {
  const auto body = ConvexBody::ball(Vec::Zero(3), 1.0);
  const auto field = SkewField::tridiagonal(3, 1.0);
  Vec x(3);
  x << 1.1, 0.2, -0.3;  // outside, generic direction
  for (auto _ : state) {
    auto r = skew_project(body, field, x);
    benchmark::DoNotOptimize(r.first);
  }
}
BENCHMARK(BM_SkewProject);

void BM_W1PerDim(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  CounterRng rng(11, 0);
  Mat A(n, 3), B(n, 3);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < 3; ++j) {
      A(i, j) = rng.normal();
      B(i, j) = rng.normal();
    }
  for (auto _ : state) {
    auto rep = w1_per_dim(A, B);
    benchmark::DoNotOptimize(rep.per_dimension);
  }
}
BENCHMARK(BM_W1PerDim)->Arg(1000)->Arg(3000);

}  // namespace

BENCHMARK_MAIN();
