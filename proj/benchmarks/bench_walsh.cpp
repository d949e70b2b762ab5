#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include <corrint/walsh.hpp>

static void BM_WalshTransform(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> values(n);
  for (auto& v : values) v = u(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(corrint::walsh_transform(values));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_WalshTransform)->RangeMultiplier(4)->Range(1 << 6, 1 << 18)->Complexity();

static void BM_WalshCellSign(benchmark::State& state) {
  const int level = static_cast<int>(state.range(0));
  const std::uint64_t cells = std::uint64_t{1} << level;
  for (auto _ : state) {
    int acc = 0;
    for (std::uint64_t c = 0; c < cells; ++c) acc += corrint::walsh_cell_sign(cells - 1, c, level);
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_WalshCellSign)->DenseRange(8, 16, 4);
