#include <doctest.h>

#include <random>

#include <corrint/errors.hpp>
#include <corrint/rcd.hpp>

using namespace corrint;

namespace {
TruncVector V(std::vector<double> c) { return TruncVector(std::move(c)); }
}

TEST_CASE("kernels of simple selections") {
  auto space = std::make_shared<const DiscreteSpace>(DiscreteSpace::uniform(4));
  const SigmaPartition g(4, {{0, 1}, {2, 3}});
  const Selection constant(space, SigmaPartition::trivial(4), std::vector<TruncVector>(4, V({1, 2})));
  const auto kc = rcd_of_selection(constant, g);
  for (const auto& blk : kc.blocks()) {
    CHECK(blk.support == std::vector<TruncVector>{V({1, 2})});
    CHECK(blk.weights == std::vector<Rational>{Rational(1)});
  }
  const Selection split(space, SigmaPartition::singletons(4), {V({1, 0}), V({0, 1}), V({0, 1}), V({0, 1})});
  const auto ks = rcd_of_selection(split, g);
  CHECK(ks.block(0).support.size() == 2);
  CHECK(ks.block(0).weights == std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
  CHECK(barycenter(ks).values[0] == V({0.5, 0.5}));
}

TEST_CASE("kernel validation") {
  const SigmaPartition g = SigmaPartition::trivial(2);
  CHECK_THROWS(TransitionKernel(g, {Rational(1)}, {KernelBlock{{V({1})}, {Rational(1, 2)}}}));
  CHECK_THROWS(TransitionKernel(g, {Rational(1)}, {KernelBlock{{V({1})}, {Rational(-1), Rational(2)}}}));
  const TransitionKernel merged(g, {Rational(1)}, {KernelBlock{{V({1}), V({1 + 1e-14})}, {Rational(1, 2), Rational(1, 2)}}});
  CHECK(merged.block(0).support.size() == 1);
}

TEST_CASE("kernel mixing") {
  auto space = std::make_shared<const DiscreteSpace>(DiscreteSpace::uniform(2));
  const auto g = SigmaPartition::trivial(2);
  const auto k1 = rcd_of_selection(Selection(space, g, {V({1}), V({1})}), g);
  const auto k2 = rcd_of_selection(Selection(space, g, {V({3}), V({3})}), g);
  CHECK(kernel_mix(k1, k2, Rational(1)) == k1);
  CHECK(kernel_mix(k1, k1, Rational(1, 3)) == k1);
  const auto m = kernel_mix(k1, k2, Rational(1, 4));
  CHECK(m.block(0).weights == std::vector<Rational>{Rational(1, 4), Rational(3, 4)});
  CHECK(barycenter(m).values[0][0] == doctest::Approx(2.5));
  CHECK_THROWS(kernel_mix(k1, k2, Rational(3, 2)));
}

TEST_CASE("kernel distance and separation") {
  auto space = std::make_shared<const DiscreteSpace>(DiscreteSpace::uniform(1));
  const auto g = SigmaPartition::trivial(1);
  const auto kv = rcd_of_selection(Selection(space, g, {V({1, 0})}), g);
  const auto kw = rcd_of_selection(Selection(space, g, {V({0, 2})}), g);
  CHECK(kernel_distance(kv, kv, 4.0, 4) == 0.0);
  CHECK(kernel_distance(kv, kw, 4.0, 4) >= 2.0 - 1e-12);
  const auto rep = kernel_separation(kv, kw, 4.0, 4);
  CHECK_FALSE(rep.kernels_equal);
  CHECK(rep.separated);
  // Same mean, different laws: first moments cannot tell them apart.
  auto two = std::make_shared<const DiscreteSpace>(DiscreteSpace::uniform(2));
  const auto g2 = SigmaPartition::trivial(2);
  const auto spread = rcd_of_selection(Selection(two, SigmaPartition::singletons(2), {V({-1}), V({1})}), g2);
  const auto point = rcd_of_selection(Selection(two, g2, {V({0}), V({0})}), g2);
  const auto clipped = kernel_separation(spread, point, 0.5, 1);
  CHECK_FALSE(clipped.kernels_equal);
  CHECK_FALSE(clipped.separated);
  CHECK(clipped.unseparated_blocks == std::vector<int>{0});
}

TEST_CASE("barycenter of the kernel equals the conditional expectation") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 10);
    auto space = std::make_shared<const DiscreteSpace>(DiscreteSpace::uniform(n));
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (auto& l : labels) l = static_cast<int>(rng() % 3);
    const auto g = SigmaPartition::from_labels(labels);
    std::vector<TruncVector> values;
    for (int t = 0; t < n; ++t) values.push_back(V({static_cast<double>(rng() % 7), static_cast<double>(rng() % 5) / 8.0}));
    const Selection f(space, SigmaPartition::singletons(n), values);
    const auto bary = barycenter(rcd_of_selection(f, g));
    const auto direct = conditional_expectation(f, g);
    for (std::size_t b = 0; b < g.block_count(); ++b) {
      for (std::size_t i = 0; i < 2; ++i) CHECK(std::fabs(bary.values[b][i] - direct.values[b][i]) <= 1e-12);
    }
  }
}
