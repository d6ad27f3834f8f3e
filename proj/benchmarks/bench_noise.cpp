#include <benchmark/benchmark.h>

#include <cmath>

#include "zeroone/levy_noise.hpp"
#include "zeroone/rng.hpp"

namespace {

void BM_PhiloxUniform(benchmark::State& state) {
  zeroone::CounterRng rng(42, {1});
  for (auto _ : state) benchmark::DoNotOptimize(rng.uniform());
}
BENCHMARK(BM_PhiloxUniform);

void BM_PoissonSample(benchmark::State& state) {
  zeroone::CounterRng rng(42, {2});
  const double mean = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(rng.poisson(mean));
}
BENCHMARK(BM_PoissonSample)->Arg(3)->Arg(30)->Arg(3000);

void BM_GaussianReplicate(benchmark::State& state) {
  const zeroone::NoiseModel model(zeroone::NoiseSpec::gaussian(),
                                  {zeroone::Region::from_box({{0.0, 1.0}, {0.0, 1.0}}),
                                   zeroone::Region::from_box({{0.5, 1.5}, {0.0, 1.0}})});
  std::uint64_t r = 0;
  for (auto _ : state) benchmark::DoNotOptimize(model.region_values(r++));
}
BENCHMARK(BM_GaussianReplicate);

void BM_ConditionalExpectation(benchmark::State& state) {
  zeroone::ConditionalOptions opts;
  opts.samples = static_cast<std::size_t>(state.range(0));
  opts.workers = 1;
  const auto c = zeroone::Region::from_box({{0.0, 1.0}, {0.0, 1.0}});
  const auto b = zeroone::Region::from_box({{0.5, 1.5}, {0.0, 1.0}});
  for (auto _ : state) {
    auto out = zeroone::conditional_expectation_gaussian([](double x) { return std::tanh(x); }, c, b, opts);
    benchmark::DoNotOptimize(out.values.data());
  }
}
BENCHMARK(BM_ConditionalExpectation)->Arg(1000)->Arg(10000);

}  // namespace
