#include <doctest.h>

#include <random>

#include <corrint/errors.hpp>
#include <corrint/set_integration.hpp>

#include "oracles.hpp"

using namespace corrint;

namespace {
TruncVector V(std::vector<double> c) { return TruncVector(std::move(c)); }
const Metric kEuclid = Metric::norm(NormFlavor::Euclid);

Workspace ws_for(int k, int N) {
  Workspace ws;
  ws.dim = static_cast<std::size_t>(k * (N + 1));
  return ws;
}

std::vector<TruncVector> sorted(std::vector<TruncVector> v) {
  std::sort(v.begin(), v.end());
  return v;
}

/// Distinct brute-force integrals of the alg-measurable selections.
std::vector<TruncVector> brute_cloud(const Correspondence& corr, const SigmaPartition& alg) {
  std::vector<std::vector<TruncVector>> values;
  std::vector<double> weights;
  for (const auto& block : alg.blocks()) {
    values.push_back(corr.values(block.front()));
    weights.push_back(corr.space().mass_of(block).to_double());
  }
  return oracle::all_integrals(values, weights, corr.dim());
}
}  // namespace

TEST_CASE("point clouds dedup and order canonically") {
  const PointCloudSet c(2, {V({1, 0}), V({0, 1}), V({1, 0}), V({1e-14, 1})});
  CHECK(c.size() == 2);
  CHECK(c[0] == V({0, 1}));
  CHECK(c.contains(V({1, 0}), kEuclid));
  CHECK(c.distance_to(V({1, 1}), kEuclid) == doctest::Approx(1.0));
}

TEST_CASE("nearest neighbour agrees with a linear scan") {
  std::mt19937_64 rng(5);
  std::vector<TruncVector> pts;
  for (int i = 0; i < 3000; ++i) {
    TruncVector v(4);
    for (std::size_t m = 0; m < 4; ++m) v[m] = static_cast<double>(static_cast<int>(rng() % 2001) - 1000) / 500.0;
    pts.push_back(v);
  }
  const PointCloudSet cloud(4, pts);
  for (auto topo : {Topology::Norm, Topology::Weak}) {
    for (auto f : {NormFlavor::Sum, NormFlavor::Euclid, NormFlavor::Max}) {
      const Metric m(topo, f);
      for (int q = 0; q < 100; ++q) {
        TruncVector v(4);
        for (std::size_t i = 0; i < 4; ++i) v[i] = static_cast<double>(static_cast<int>(rng() % 3001) - 1500) / 500.0;
        double best = 1e300;
        for (const auto& p : cloud.points()) best = std::min(best, m.distance(v, p));
        CHECK(cloud.distance_to(v, m) == best);
      }
    }
  }
}

TEST_CASE("integration of selections") {
  auto space = std::make_shared<const DiscreteSpace>(DiscreteSpace::uniform(2));
  const Selection constant(space, SigmaPartition::trivial(2), {V({2, 3}), V({2, 3})});
  CHECK(integrate_selection(constant) == V({2, 3}));
  const Selection half(space, SigmaPartition::singletons(2), {V({1, 0}), V({0, 0})});
  CHECK(integrate_selection(half) == V({0.5, 0}));
  const auto b = build_counterexample(ws_for(2, 2), 2, Rational(0), 2, 2);
  const auto f1 = b.pure_selections()[1];
  const auto e1 = integrate_selection(f1);
  for (std::size_t i = 0; i < e1.dim(); ++i) CHECK(std::fabs(e1[i] - (i == 0 ? 1.0 : 0.0)) <= 1e-12);
}

TEST_CASE("conditional expectation reductions") {
  auto space = std::make_shared<const DiscreteSpace>(
      DiscreteSpace({Rational(1, 8), Rational(3, 8), Rational(1, 4), Rational(1, 4)}));
  const Selection f(space, SigmaPartition::singletons(4), {V({8}), V({0}), V({4}), V({-4})});
  const auto trivial = conditional_expectation(f, SigmaPartition::trivial(4));
  CHECK(trivial.values.front()[0] == doctest::Approx(integrate_selection(f)[0]));
  const SigmaPartition g(4, {{0, 1}, {2, 3}});
  const auto eg = conditional_expectation(f, g);
  CHECK(eg.values[0][0] == doctest::Approx(2.0));
  CHECK(eg.values[1][0] == doctest::Approx(0.0));
  const auto idem = conditional_expectation(lift(eg, space), g);
  CHECK(idem.values[0] == eg.values[0]);
  // Conditioning a coarse selection on atoms returns its atom values.
  const Selection coarse(space, g, {V({1}), V({1}), V({2}), V({2})});
  const auto fine = conditional_expectation(coarse, SigmaPartition::singletons(4));
  CHECK(fine.values[1][0] == doctest::Approx(1.0));
  CHECK(fine.values[3][0] == doctest::Approx(2.0));
}

TEST_CASE("aumann integral set examples") {
  auto space = std::make_shared<const DiscreteSpace>(DiscreteSpace::uniform(2));
  const Correspondence c(space, {{V({0, 0}), V({2, 2})}, {V({0, 0}), V({2, 2})}});
  const auto cloud = aumann_integral_set(c, SigmaPartition::singletons(2));
  CHECK(cloud.points() == std::vector<TruncVector>{V({0, 0}), V({1, 1}), V({2, 2})});

  auto one = std::make_shared<const DiscreteSpace>(DiscreteSpace::uniform(1));
  const Correspondence single(one, {{V({1, 2}), V({3, 4})}});
  CHECK(aumann_integral_set(single, SigmaPartition::singletons(1)).size() == 2);
}

TEST_CASE("enumerate and Minkowski modes agree with brute force") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 40; ++trial) {
    const int atoms = 1 + static_cast<int>(rng() % 6);
    auto space = std::make_shared<const DiscreteSpace>(DiscreteSpace::uniform(atoms));
    std::vector<std::vector<TruncVector>> values;
    // Repeated value lists exercise the grouped accumulation.
    const std::vector<TruncVector> shared{V({0, 0}), V({1, 0}), V({0.5, 1})};
    for (int t = 0; t < atoms; ++t) {
      if (rng() % 2) {
        values.push_back(shared);
      } else {
        std::vector<TruncVector> own;
        const int n = 1 + static_cast<int>(rng() % 3);
        for (int i = 0; i < n; ++i) {
          own.push_back(V({static_cast<double>(rng() % 5), static_cast<double>(rng() % 5) / 4.0}));
        }
        values.push_back(own);
      }
    }
    const Correspondence corr(space, values);
    const auto alg = SigmaPartition::singletons(atoms);
    const PointCloudSet brute(2, brute_cloud(corr, alg));
    const auto enumerated = aumann_integral_set(corr, alg, {1'000'000, SetMode::Enumerate});
    const auto minkowski = aumann_integral_set(corr, alg, {1'000'000, SetMode::Minkowski});
    REQUIRE(enumerated.size() == brute.size());
    REQUIRE(minkowski.size() == brute.size());
    for (std::size_t i = 0; i < brute.size(); ++i) {
      CHECK(oracle::euclid_distance(enumerated[i], brute[i]) <= 1e-12);
      CHECK(oracle::euclid_distance(minkowski[i], brute[i]) <= 1e-12);
    }
  }
}

TEST_CASE("E1 midpoint is absent when t_alg = f_alg") {
  const auto b = build_counterexample(ws_for(2, 0), 2, Rational(0), 0, 3);
  const auto cloud = aumann_integral_set(*b.corr, b.model.f_alg);
  const auto brute = brute_cloud(*b.corr, b.model.f_alg);
  const double oracle_gap = oracle::distance_to_set(b.e_mean(), brute);
  CHECK(oracle_gap > kMemberTol);
  CHECK(cloud.distance_to(b.e_mean(), kEuclid) == doctest::Approx(oracle_gap).epsilon(1e-12));
  CHECK_FALSE(cloud.contains(b.e_mean(), kEuclid));
}

TEST_CASE("capacity errors") {
  const auto b = build_counterexample(ws_for(2, 0), 2, Rational(0), 0, 3, 2);
  CHECK_THROWS_AS(aumann_integral_set(*b.corr, b.model.t_alg, {100, SetMode::Enumerate}), CapacityError);
  CHECK_THROWS_AS(aumann_integral_set(*b.corr, b.model.t_alg, {10, SetMode::Minkowski}), CapacityError);
}

TEST_CASE("conditional set reductions and membership") {
  const auto b = build_counterexample(ws_for(2, 0), 2, Rational(0), 0, 2, 3);
  const auto trivial = SigmaPartition::trivial(b.model.space->size());
  const auto cs = conditional_set(*b.corr, b.model.t_alg, trivial);
  const auto cloud = aumann_integral_set(*b.corr, b.model.t_alg);
  REQUIRE(cs.block_set(0).size() == cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) CHECK(oracle::euclid_distance(cs.block_set(0)[i], cloud[i]) <= 1e-12);
  CHECK_THROWS_AS(conditional_set(*b.corr, trivial, b.model.f_alg), PreconditionError);

  // With t_alg = f_alg the midpoint function is absent; with a 3-fold refinement it is present.
  BlockFunction mid{b.model.f_alg, {}};
  for (std::size_t blk = 0; blk < b.model.f_alg.block_count(); ++blk) {
    TruncVector v(b.corr->dim());
    for (const auto& s : b.pure_selections()) v += (1.0 / 3.0) * s.at(b.model.f_alg.block(blk).front());
    mid.values.push_back(v);
  }
  const auto coarse = conditional_set(*b.corr, b.model.f_alg, b.model.f_alg);
  CHECK_FALSE(coarse.contains(mid, kEuclid));
  const auto fine = conditional_set(*b.corr, b.model.t_alg, b.model.f_alg);
  CHECK(fine.contains(mid, kEuclid));
}

TEST_CASE("lyapunov mixing") {
  auto space = std::make_shared<const DiscreteSpace>(DiscreteSpace::uniform(4));
  const SigmaPartition f(4, {{0, 1}, {2, 3}});
  const auto t = SigmaPartition::singletons(4);
  const Selection f1(space, f, {V({1, 0}), V({1, 0}), V({0, 0}), V({0, 0})});
  const Selection f2(space, f, {V({0, 1}), V({0, 1}), V({2, 2}), V({2, 2})});
  const auto same = lyapunov_mix({f1, f2}, {Rational(1), Rational(0)}, f, t);
  CHECK(same.choice() == f1.choice());
  const auto half = lyapunov_mix({f1, f2}, {Rational(1, 2), Rational(1, 2)}, f, t);
  const auto e = conditional_expectation(half, f);
  CHECK(e.values[0] == V({0.5, 0.5}));
  CHECK(e.values[1] == V({1, 1}));
  CHECK_THROWS_AS(lyapunov_mix({f1, f2}, {Rational(1, 3), Rational(2, 3)}, f, t), DivisibilityError);
  CHECK_THROWS_AS(lyapunov_mix({f1, f2}, {Rational(1, 2), Rational(1, 3)}, f, t), PreconditionError);
  const Selection atomwise(space, t, {V({1, 0}), V({0, 0}), V({0, 0}), V({0, 0})});
  CHECK_THROWS_AS(lyapunov_mix({atomwise, f2}, {Rational(1, 2), Rational(1, 2)}, f, t), PreconditionError);
}

TEST_CASE("lyapunov mixing of the E1 selections hits the mean") {
  for (int k : {1, 2, 3}) {
    const auto b = build_counterexample(ws_for(k, 2), k, Rational(1, 4), 2, 2, k + 1);
    std::vector<Rational> w(static_cast<std::size_t>(k + 1), Rational(1, k + 1));
    const auto g = lyapunov_mix(b.pure_selections(), w, b.model.f_alg, b.model.t_alg);
    CHECK(g.source() == b.corr);
    const auto integral = integrate_selection(g);
    const auto mean = b.e_mean();
    for (std::size_t i = 0; i < mean.dim(); ++i) CHECK(std::fabs(integral[i] - mean[i]) <= 1e-12);
  }
}

TEST_CASE("convexity gap examples") {
  CHECK(convexity_gap(PointCloudSet(2, {V({1, 1})}), 100, kEuclid) == 0.0);
  const PointCloudSet pair(2, {V({0, 0}), V({3, 4})});
  CHECK(convexity_gap(pair, 100, kEuclid) == doctest::Approx(2.5));
  // A fine grid on a segment is nearly closed under midpoints.
  std::vector<TruncVector> grid;
  for (int i = 0; i <= 64; ++i) grid.push_back(V({i / 64.0, 0}));
  CHECK(convexity_gap(PointCloudSet(2, grid), 500, kEuclid) <= 0.5 / 64.0 + 1e-15);
  // Deterministic given the seed.
  const auto b = build_counterexample(ws_for(2, 0), 2, Rational(0), 0, 2, 2);
  const auto cloud = aumann_integral_set(*b.corr, b.model.t_alg);
  CHECK(convexity_gap(cloud, 300, kEuclid, 9) == convexity_gap(cloud, 300, kEuclid, 9));
}

TEST_CASE("hausdorff semidistance") {
  const PointCloudSet a(2, {V({0, 0}), V({3, 4})});
  const PointCloudSet zero(2, {V({0, 0})});
  CHECK(hausdorff_semidistance(a, a, kEuclid) == 0.0);
  CHECK(hausdorff_semidistance(zero, a, kEuclid) == 0.0);
  CHECK(hausdorff_semidistance(a, zero, kEuclid) == 5.0);
}

TEST_CASE("uhc diagnostic examples") {
  auto space = std::make_shared<const DiscreteSpace>(DiscreteSpace::uniform(2));
  const auto alg = SigmaPartition::singletons(2);
  const auto trivial = SigmaPartition::trivial(2);
  const TruncVector v = V({3, 4});
  auto make = [&](double s) {
    return std::make_shared<const Correspondence>(
        space, std::vector<std::vector<TruncVector>>(2, {V({0, 0}), s * v}));
  };
  const auto limit = Correspondence(space, std::vector<std::vector<TruncVector>>(2, {V({0, 0})}));
  std::vector<std::shared_ptr<const Correspondence>> shrinking;
  for (int n = 1; n <= 5; ++n) shrinking.push_back(make(1.0 / n));
  const auto sigma = uhc_diagnostic(shrinking, limit, alg, trivial, kEuclid);
  for (std::size_t i = 0; i < sigma.size(); ++i) CHECK(sigma[i] <= 5.0 / static_cast<double>(i + 1) + 1e-12);
  const auto fixed = make(1.0);
  const auto zeros = uhc_diagnostic({fixed, fixed}, *fixed, alg, trivial, kEuclid);
  CHECK(zeros == std::vector<double>{0.0, 0.0});
}

TEST_CASE("uhc diagnostic of truncations matches brute force") {
  const auto ws = ws_for(2, 3);
  const auto limit = build_counterexample(ws, 2, Rational(0), 3, 2, 2);
  const auto brute_limit = brute_cloud(*limit.corr, limit.model.t_alg);
  std::vector<std::shared_ptr<const Correspondence>> family;
  std::vector<double> expect;
  for (int m = 0; m <= 3; ++m) {
    const auto bm = build_counterexample(ws, 2, Rational(0), m, 2, 2);
    family.push_back(bm.corr);
    expect.push_back(oracle::semidistance(brute_cloud(*bm.corr, bm.model.t_alg), brute_limit));
  }
  const auto sigma = uhc_diagnostic(family, *limit.corr, limit.model.t_alg,
                                    SigmaPartition::trivial(limit.model.space->size()), kEuclid);
  for (std::size_t m = 0; m < sigma.size(); ++m) CHECK(sigma[m] == doctest::Approx(expect[m]).epsilon(1e-12));
  CHECK(sigma.back() == 0.0);
}
