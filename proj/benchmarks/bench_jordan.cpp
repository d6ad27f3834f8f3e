#include <benchmark/benchmark.h>

#include "zeroone/compact_groups.hpp"
#include "zeroone/jordan.hpp"

namespace {

zeroone::Matrix scrambled(int n) {
  // Upper-triangular unimodular similarity of a mixed Jordan matrix.
  zeroone::Matrix k = zeroone::Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    k(i, i) = i % 3 == 0 ? 2.0 : (i % 3 == 1 ? 1.0 : 0.5);
    if (i + 1 < n && i % 3 == 1) k(i, i + 1) = 1.0;
  }
  zeroone::Matrix s = zeroone::Matrix::Identity(n, n);
  for (int i = 0; i + 1 < n; ++i) s(i, i + 1) = 1.0;
  return s * k * s.inverse();
}

void BM_RealJordanForm(benchmark::State& state) {
  const auto a = scrambled(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto dec = zeroone::real_jordan_form(a);
    benchmark::DoNotOptimize(dec.residual);
  }
}
BENCHMARK(BM_RealJordanForm)->DenseRange(2, 6, 2);

void BM_CyclicAverage(benchmark::State& state) {
  const auto a = zeroone::rotation2(1.0);
  for (auto _ : state) {
    auto s = zeroone::cyclic_average(a, state.range(0), zeroone::CesaroWeights::Smooth);
    benchmark::DoNotOptimize(s.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CyclicAverage)->RangeMultiplier(4)->Range(64, 1 << 14)->Complexity();

}  // namespace
