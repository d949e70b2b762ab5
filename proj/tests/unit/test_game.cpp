#include <doctest.h>

#include <cmath>
#include <random>

#include <corrint/errors.hpp>
#include <corrint/game.hpp>

#include "oracles.hpp"

using namespace corrint;

namespace {
Workspace ws_for(int k, int N) {
  Workspace ws;
  ws.dim = static_cast<std::size_t>(k * (N + 1));
  return ws;
}

std::size_t action_index(const LargeGame& g, const TruncVector& a) {
  for (std::size_t i = 0; i < g.action_count(); ++i) {
    if (oracle::euclid_distance(g.actions()[i], a) <= 1e-12) return i;
  }
  return g.action_count();
}
}  // namespace

TEST_CASE("payoff h special cases and the complex oracle") {
  const std::size_t d = 4;
  const std::vector<TruncVector> xs{TruncVector::basis(0, d), TruncVector::basis(1, d)};
  const TruncVector zero(d);
  CHECK(payoff_h(0.3, zero, xs, 0.0, 0.0, NormFlavor::Euclid) == 0.0);
  CHECK(payoff_h(0.1, zero, xs, 0.25, 0.2, NormFlavor::Euclid) == 0.0);
  const double h = payoff_h(0.3, zero, xs, 0.25, 0.0, NormFlavor::Euclid);
  CHECK(h == doctest::Approx(oracle::payoff_h(0.3, zero, xs, 0.25, 0.0)).epsilon(1e-12));

  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 500; ++trial) {
    const int k = 1 + static_cast<int>(rng() % 4);
    std::vector<TruncVector> x;
    for (int i = 0; i < k; ++i) {
      TruncVector v(d);
      for (std::size_t m = 0; m < d; ++m) v[m] = static_cast<double>(static_cast<int>(rng() % 201) - 100) / 100.0;
      x.push_back(v);
    }
    TruncVector a(d);
    for (std::size_t m = 0; m < d; ++m) a[m] = static_cast<double>(static_cast<int>(rng() % 201) - 100) / 100.0;
    const double gamma = static_cast<double>(rng() % 4) / 8.0;
    const double l = gamma + (1.0 - gamma) * static_cast<double>(rng() % 1000 + 1) / 1001.0;
    const double theta = static_cast<double>(rng() % 100 + 1) / 400.0;
    CHECK(payoff_h(l, a, x, theta, gamma, NormFlavor::Euclid) ==
          doctest::Approx(oracle::payoff_h(l, a, x, theta, gamma)).epsilon(1e-12));
  }
}

TEST_CASE("payoff G at the mean aggregate") {
  const auto b = build_counterexample(ws_for(2, 3), 2, Rational(1, 4), 3, 2, 3);
  const auto game = LargeGame::counterexample(b, NormFlavor::Euclid);
  const TruncVector mean = b.e_mean();
  for (int t = 0; t < b.model.space->size(); ++t) {
    CHECK(payoff_G(game, t, TruncVector(mean.dim()), mean) == 0.0);
    for (const auto& m : game.mixed_at(t)) CHECK(std::fabs(payoff_G(game, t, m, mean)) <= 1e-15);
    CHECK(payoff_G(game, t, 0.5 * TruncVector::basis(5, mean.dim()), mean) < 0.0);
  }
}

TEST_CASE("best responses") {
  const auto b = build_counterexample(ws_for(2, 3), 2, Rational(1, 4), 3, 2, 3);
  const auto game = LargeGame::counterexample(b, NormFlavor::Euclid);
  const Aggregate at_mean{Externality::Integral, {b.e_mean()}};
  const auto zero = action_index(game, TruncVector(b.e_mean().dim()));
  for (int t : b.model.t2_atoms()) CHECK(best_response(game, t, at_mean) == std::vector<int>{static_cast<int>(zero)});
  for (int t : b.model.t1_atoms()) {
    std::vector<int> expect{static_cast<int>(zero)};
    for (const auto& m : game.mixed_at(t)) expect.push_back(static_cast<int>(action_index(game, m)));
    std::sort(expect.begin(), expect.end());
    CHECK(best_response(game, t, at_mean) == expect);
  }
  // Away from the mean, on a mesh interval labelled 0, only a = 0 is a best response.
  TruncVector far = b.e_mean();
  far[0] += 1.0;
  const Aggregate off{Externality::Integral, {far}};
  const double theta = game.beta() * oracle::euclid_distance(far, b.e_mean());
  for (int t : b.model.t1_atoms()) {
    const double ratio = (game.phi(t) - 0.25) / theta;
    const auto q = static_cast<long long>(std::floor(ratio)) % 3;
    if (q == 0 && std::fabs(std::sin(ratio * std::numbers::pi)) > 1e-9) {
      CHECK(best_response(game, t, off) == std::vector<int>{static_cast<int>(zero)});
    }
  }
}

TEST_CASE("single player game is solved by argmax") {
  auto space = std::make_shared<const DiscreteSpace>(DiscreteSpace::uniform(1));
  const std::vector<TruncVector> actions{TruncVector(std::vector<double>{0.0}), TruncVector(std::vector<double>{1.0}),
                                         TruncVector(std::vector<double>{2.0})};
  const auto game = LargeGame::generic(space, SigmaPartition::trivial(1), SigmaPartition::trivial(1), actions,
                                       [](int, const TruncVector& a, const Aggregate&) { return -(a[0] - 1.0) * (a[0] - 1.0); },
                                       Externality::Integral);
  EquilibriumOptions o;
  o.mode = EquilibriumMode::Exhaustive;
  const auto r = find_equilibrium(game, o);
  CHECK(r.profile.play == std::vector<int>{1});
  CHECK(r.report.residual == 0.0);
}

TEST_CASE("divisible counterexample game reaches the mean") {
  const auto b = build_counterexample(ws_for(2, 7), 2, Rational(0), 7, 3, 3);
  const auto game = LargeGame::counterexample(b, NormFlavor::Euclid);
  const auto r = find_equilibrium(game);
  CHECK(r.report.residual < 1e-9);
  CHECK(r.report.iterations <= 50);
  CHECK(r.report.distance_to_mean < 1e-9);
  CHECK(residual(game, r.profile) == doctest::Approx(r.report.residual));
  const auto v = verify_equilibrium_partition(game, r.profile);
  CHECK(v.partition_masses == std::vector<Rational>{Rational(1, 3), Rational(1, 3), Rational(1, 3)});
  CHECK(v.masses_pass);
  CHECK(v.independence_pass);
  CHECK(v.independence_table.size() == 3 * 7);
}

TEST_CASE("unbalanced profile fails an independence row") {
  const auto b = build_counterexample(ws_for(2, 3), 2, Rational(0), 3, 2, 3);
  const auto game = LargeGame::counterexample(b, NormFlavor::Euclid);
  StrategyProfile p;
  p.play.assign(static_cast<std::size_t>(b.model.space->size()), 0);
  // Mixed point 1 on the left half, 2 on the right half, nothing else.
  for (int t : b.model.t1_atoms()) {
    const int cell = b.model.cell_of_atom[static_cast<std::size_t>(t)];
    const auto& m = game.mixed_at(t)[cell < 2 ? 0 : 1];
    p.play[static_cast<std::size_t>(t)] = static_cast<int>(action_index(game, m));
  }
  const auto v = verify_equilibrium_partition(game, p);
  CHECK_FALSE(v.masses_pass);
  CHECK_FALSE(v.independence_pass);
}

TEST_CASE("lemma bound on the canonical partition") {
  const auto q = canonical_q_system(2, Rational(0), Rational(1, 8));
  const auto lb = lemma_bound_check(q, 10);
  CHECK(lb.bound == 0.5);
  CHECK(lb.sum < 0.5);
  CHECK(lb.pass);
  std::vector<int> labels(8);
  for (int c = 0; c < 8; ++c) labels[static_cast<std::size_t>(c)] = c % 3;
  CHECK(lemma_bound_check(q_system_from_labels(2, Rational(0), Rational(1, 8), labels), 10).sum == lb.sum);
}

TEST_CASE("lemma bound agrees with per-n integrals") {
  for (int e : {3, 4, 5}) {
    for (int k : {1, 2, 3}) {
      for (int phase = 0; phase <= k; ++phase) {
        const Rational d0(1, std::int64_t{1} << e);
        const auto q = canonical_q_system(k, Rational(0), d0, phase);
        const auto lb = lemma_bound_check(q, 6);
        double expect = 0.0;
        for (int i = 1; i <= k; ++i) {
          std::vector<int> integrand(q.mesh_count());
          for (std::size_t c = 0; c < integrand.size(); ++c) {
            const int label = static_cast<int>((c + static_cast<std::size_t>(phase)) % static_cast<std::size_t>(k + 1));
            integrand[c] = label == i ? 1 : (label == 0 ? -1 : 0);
          }
          expect = std::max(expect, oracle::lemma_sum(integrand, 0.0, d0.to_double(), 6, std::max(6, e) + 2));
        }
        CHECK(lb.sum == doctest::Approx(expect).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("degenerate q system") {
  const auto q = q_system_from_labels(2, Rational(0), Rational(1, 8), std::vector<int>(8, 0));
  const auto lb = lemma_bound_check(q, 6);
  CHECK(lb.sum == doctest::Approx(1.0));
  CHECK_FALSE(lb.pass);
  QSystem overlap = q;
  overlap.cells[0][0] = overlap.cells[1][0] = true;
  CHECK_THROWS_AS(lemma_bound_check(overlap, 6), PreconditionError);
}

TEST_CASE("externality and mode tags") {
  CHECK(parse_externality("CONDITIONAL") == Externality::Conditional);
  CHECK(to_string(parse_equilibrium_mode("EXHAUSTIVE")) == "EXHAUSTIVE");
  CHECK_THROWS(parse_equilibrium_mode("RANDOM"));
}
