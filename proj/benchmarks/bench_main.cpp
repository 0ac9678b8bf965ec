#include <benchmark/benchmark.h>

#include "gnlab/control.hpp"
#include "gnlab/corpus.hpp"
#include "gnlab/covering.hpp"
#include "gnlab/funcspace.hpp"
#include "gnlab/gn.hpp"
#include "gnlab/norms.hpp"

using namespace gnlab;

namespace {

void BM_ChiDerivatives(benchmark::State& state) {
  auto f = AnalyticFunction::bump_chi();
  double out[kDefaultMaxOrder + 1];
  double x = 0.137;
  for (auto _ : state) {
    f.derivatives(x, out);
    benchmark::DoNotOptimize(out);
    x = x < 0.9 ? x + 1e-4 : 0.1;
  }
}
BENCHMARK(BM_ChiDerivatives);

void BM_Sample(benchmark::State& state) {
  auto f = corpus_function("spline_bump");
  for (auto _ : state) benchmark::DoNotOptimize(sample(f, {0.0, 1.0}, state.range(0), 3));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Sample)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Complexity();

void BM_ProductNorm(benchmark::State& state) {
  auto g = sample(AnalyticFunction::bump_chi(), {0.0, 1.0}, state.range(0) + 1, 2);
  ProductSpec spec{{0, 1, 2}, Exponent(2), {0.0, 1.0}};
  for (auto _ : state) benchmark::DoNotOptimize(product_norm(g, spec));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ProductNorm)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Complexity();

void BM_Generalized(benchmark::State& state) {
  auto g = sample(AnalyticFunction::bump_chi(), {0.0, 1.0}, 8193, 3);
  auto params = GNParams::cor7();
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_generalized(g, params).ratio);
}
BENCHMARK(BM_Generalized);

void BM_Gagliardo(benchmark::State& state) {
  auto g = sample(AnalyticFunction::sine_bump(3.0), {0.0, 1.0}, state.range(0) + 1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(gagliardo_seminorm(g, 0.5, 2.0));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Gagliardo)->RangeMultiplier(2)->Range(256, 2048)->Complexity(benchmark::oNSquared);

void BM_CriticalRadius(benchmark::State& state) {
  BalanceProfile prof(sample(AnalyticFunction::bump_chi(), {0.0, 1.0}, 8193, 3),
                      BalanceSpec::from_params(GNParams::cor7()));
  for (auto _ : state) benchmark::DoNotOptimize(critical_radius(prof, 0.3).radius);
}
BENCHMARK(BM_CriticalRadius);

void BM_Cover(benchmark::State& state) {
  BalanceProfile prof(sample(corpus_function("sine_bump_3"), {0.0, 1.0}, 8193, 3),
                      BalanceSpec::from_params(GNParams::cor7()));
  CoverOptions opts;
  opts.e_resolution = 2049;
  for (auto _ : state) benchmark::DoNotOptimize(build_cover(prof, opts).centers.size());
}
BENCHMARK(BM_Cover)->Unit(benchmark::kMillisecond);

void BM_Rk4(benchmark::State& state) {
  ControlSystem sys{7, 1.0};
  law::ScaledBumpTriple w{1e-2, 0.3, 1};
  for (auto _ : state) benchmark::DoNotOptimize(integrate(sys, w, state.range(0)).terminal());
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Rk4)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Complexity(benchmark::oN);

}  // namespace
BENCHMARK_MAIN();
