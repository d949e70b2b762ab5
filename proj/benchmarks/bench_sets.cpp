#include <benchmark/benchmark.h>

#include <corrint/correspondence.hpp>
#include <corrint/set_integration.hpp>

using namespace corrint;

namespace {

Workspace workspace(int k, int N) {
  Workspace ws;
  ws.dim = static_cast<std::size_t>(k * (N + 1));
  return ws;
}

}  // namespace

static void BM_AumannEnumerate(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const auto b = build_counterexample(workspace(2, N), 2, Rational(0), N, 3, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(aumann_integral_set(*b.corr, b.model.f_alg, {1'000'000, SetMode::Enumerate}));
  }
}
BENCHMARK(BM_AumannEnumerate)->Arg(1)->Arg(7)->Unit(benchmark::kMillisecond);

static void BM_AumannMinkowski(benchmark::State& state) {
  const int per_block = 1 << state.range(0);
  const auto b = build_counterexample(workspace(2, 0), 2, Rational(0), 0, 4, per_block);
  for (auto _ : state) {
    benchmark::DoNotOptimize(aumann_integral_set(*b.corr, b.model.t_alg, {1'000'000, SetMode::Minkowski}));
  }
}
BENCHMARK(BM_AumannMinkowski)->DenseRange(1, 6)->Unit(benchmark::kMillisecond);

static void BM_ConvexityGap(benchmark::State& state) {
  const auto b = build_counterexample(workspace(2, 0), 2, Rational(0), 0, 4, 16);
  const auto cloud = aumann_integral_set(*b.corr, b.model.t_alg, {1'000'000, SetMode::Minkowski});
  const auto metric = Metric::norm(NormFlavor::Euclid);
  for (auto _ : state) {
    benchmark::DoNotOptimize(convexity_gap(cloud, static_cast<int>(state.range(0)), metric));
  }
}
BENCHMARK(BM_ConvexityGap)->Arg(500)->Arg(4000)->Unit(benchmark::kMillisecond);
