#include <benchmark/benchmark.h>

#include <corrint/game.hpp>

using namespace corrint;

static void BM_BestResponseIterate(benchmark::State& state) {
  Workspace ws;
  ws.dim = 16;
  const auto b = build_counterexample(ws, 2, Rational(0), 7, static_cast<int>(state.range(0)), 3);
  const auto game = LargeGame::counterexample(b, NormFlavor::Euclid);
  for (auto _ : state) {
    benchmark::DoNotOptimize(find_equilibrium(game));
  }
}
BENCHMARK(BM_BestResponseIterate)->DenseRange(3, 5)->Unit(benchmark::kMillisecond);

static void BM_LemmaBound(benchmark::State& state) {
  const Rational d0(1, std::int64_t{1} << state.range(0));
  const auto q = canonical_q_system(2, Rational(1, 4), d0, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lemma_bound_check(q, 10));
  }
}
BENCHMARK(BM_LemmaBound)->DenseRange(3, 8, 5);
