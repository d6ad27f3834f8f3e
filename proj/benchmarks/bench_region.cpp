#include <benchmark/benchmark.h>

#include <vector>

#include "zeroone/region.hpp"

namespace {

void BM_AtomizeExact(benchmark::State& state) {
  std::vector<zeroone::Region> regions;
  for (int m = 0; m < state.range(0); ++m) {
    const double s = 1 << m;
    regions.push_back(zeroone::Region::from_box({{0.0, s}, {0.0, 1.0 / s}}));
  }
  for (auto _ : state) {
    auto table = zeroone::atomize(regions, zeroone::AtomizeMethod::Auto);
    benchmark::DoNotOptimize(table.atoms.data());
  }
}
BENCHMARK(BM_AtomizeExact)->DenseRange(2, 10, 4);

void BM_AtomizeMonteCarlo(benchmark::State& state) {
  const zeroone::Region a = zeroone::transform(zeroone::rotation2(0.3), zeroone::Region::cube(2, 0.0, 1.0));
  const zeroone::Region b = zeroone::Region::cube(2, 0.0, 1.0);
  std::vector<zeroone::Region> regions{a, b};
  const zeroone::McOptions mc{static_cast<std::size_t>(state.range(0)), 7, 1};
  for (auto _ : state) {
    auto table = zeroone::atomize(regions, zeroone::AtomizeMethod::MonteCarlo, mc);
    benchmark::DoNotOptimize(table.atoms.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AtomizeMonteCarlo)->RangeMultiplier(8)->Range(1 << 12, 1 << 18);

}  // namespace
