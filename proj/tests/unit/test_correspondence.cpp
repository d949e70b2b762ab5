#include <doctest.h>

#include <corrint/correspondence.hpp>
#include <corrint/errors.hpp>

#include "oracles.hpp"

using namespace corrint;

namespace {
TruncVector V(std::vector<double> c) { return TruncVector(std::move(c)); }

std::shared_ptr<const Correspondence> two_block_three_values() {
  auto space = std::make_shared<const DiscreteSpace>(DiscreteSpace::uniform(4));
  std::vector<std::vector<TruncVector>> values(4, {V({0, 0}), V({1, 0}), V({0, 1})});
  return std::make_shared<const Correspondence>(space, values);
}

Workspace ws_for(int k, int N) {
  Workspace ws;
  ws.dim = static_cast<std::size_t>(k * (N + 1));
  return ws;
}
}  // namespace

TEST_CASE("correspondence dedups values and checks shape") {
  auto space = std::make_shared<const DiscreteSpace>(DiscreteSpace::uniform(2));
  const Correspondence c(space, {{V({1, 0}), V({1, 0})}, {V({0, 1})}});
  CHECK(c.values(0).size() == 1);
  CHECK_THROWS(Correspondence(space, {{V({1, 0})}}));
  CHECK_THROWS(Correspondence(space, {{V({1, 0})}, {}}));
  CHECK_THROWS(Correspondence(space, {{V({1, 0})}, {V({1, 0, 0})}}));
}

TEST_CASE("check_measurable") {
  const auto c = two_block_three_values();
  CHECK(check_measurable(*c, SigmaPartition(4, {{0, 1}, {2, 3}})));
  auto space = std::make_shared<const DiscreteSpace>(DiscreteSpace::uniform(2));
  const Correspondence varying(space, {{V({1})}, {V({2})}});
  CHECK_FALSE(check_measurable(varying, SigmaPartition::trivial(2)));
}

TEST_CASE("selection enumeration counts") {
  const auto c = two_block_three_values();
  const SigmaPartition two(4, {{0, 1}, {2, 3}});
  CHECK(selection_count(*c, two) == "9");
  auto stream = enumerate_selections(c, two, 100);
  int n = 0;
  while (stream.next()) ++n;
  CHECK(n == 9);
  CHECK_THROWS_AS(enumerate_selections(c, two, 8), CapacityError);

  auto space = std::make_shared<const DiscreteSpace>(DiscreteSpace::uniform(3));
  auto single = std::make_shared<const Correspondence>(
      space, std::vector<std::vector<TruncVector>>{{V({1})}, {V({2})}, {V({3})}});
  auto one = enumerate_selections(single, SigmaPartition::singletons(3), 10);
  CHECK(one.next().has_value());
  CHECK_FALSE(one.next().has_value());
}

TEST_CASE("capacity error carries the exact count") {
  const auto c = two_block_three_values();
  try {
    enumerate_selections(c, SigmaPartition::singletons(4), 10);
    FAIL("expected a capacity error");
  } catch (const CapacityError& e) {
    CHECK(e.count() == "81");
  }
}

TEST_CASE("selections must be measurable and lie in the correspondence") {
  const auto c = two_block_three_values();
  const SigmaPartition two(4, {{0, 1}, {2, 3}});
  CHECK_NOTHROW(Selection(c, two, {V({1, 0}), V({1, 0}), V({0, 0}), V({0, 0})}));
  CHECK_THROWS(Selection(c, two, {V({1, 0}), V({0, 1}), V({0, 0}), V({0, 0})}));
  CHECK_THROWS(Selection(c, two, {V({2, 0}), V({2, 0}), V({0, 0}), V({0, 0})}));
}

TEST_CASE("dyadic model layout") {
  const auto m = build_dyadic_model(Rational(1, 4), 2, 3);
  CHECK(m.space->size() == 3 + 4 * 3);
  CHECK(m.f_alg.block_count() == 5);
  CHECK(m.space->mass_of(m.t2_atoms()) == Rational(1, 4));
  CHECK(m.t1_mass() == Rational(3, 4));
  CHECK(m.phi(0) == doctest::Approx(0.125));
  // First T1 cell is (1/4, 1/4 + 3/16], midpoint 1/4 + 3/32.
  CHECK(m.phi(3) == doctest::Approx(0.25 + 3.0 / 32.0));
  CHECK(is_refinement(m.t_alg, m.f_alg));
}

TEST_CASE("counterexample values match the Walsh series oracle") {
  for (int k : {1, 2, 3}) {
    for (const Rational& gamma : {Rational(0), Rational(1, 4)}) {
      const int N = 3, L = 2;
      const auto ws = ws_for(k, N);
      const auto b = build_counterexample(ws, k, gamma, N, L, 2);
      CHECK(check_measurable(*b.corr, b.model.f_alg));
      for (int j = 1; j <= k; ++j) {
        for (int c = 0; c < 4; ++c) {
          const auto expect = oracle::psi_on_cell(k, j, N, L, static_cast<std::uint64_t>(c), ws.dim);
          const auto& got = b.f_list[static_cast<std::size_t>(j - 1)].cell_value(c);
          for (std::size_t i = 0; i < ws.dim; ++i) CHECK(got[i] == expect[i]);
        }
        const auto e = oracle::e_vector(k, j, N, L, gamma.to_double(), ws.dim);
        for (std::size_t i = 0; i < ws.dim; ++i) {
          CHECK(b.e_list[static_cast<std::size_t>(j - 1)][i] == doctest::Approx(e[i]).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("e_j = (1 - gamma) x_{j-1}") {
  const auto ws = ws_for(2, 2);
  for (const Rational& gamma : {Rational(0), Rational(1, 4)}) {
    const auto b = build_counterexample(ws, 2, gamma, 2, 5);
    CHECK(norm(b.e_list[0], NormFlavor::Euclid) == doctest::Approx(1.0 - gamma.to_double()).epsilon(1e-12));
    for (int j = 0; j < 2; ++j) {
      const auto expect = (1.0 - gamma.to_double()) * ws.basis(static_cast<std::size_t>(j));
      for (std::size_t i = 0; i < ws.dim; ++i) CHECK(std::fabs(b.e_list[static_cast<std::size_t>(j)][i] - expect[i]) <= 1e-12);
    }
  }
}

TEST_CASE("E1 correspondence selection count at level 3") {
  const auto b = build_counterexample(ws_for(2, 0), 2, Rational(0), 0, 3);
  CHECK(selection_count(*b.corr, b.model.t_alg) == "6561");
  const auto pure = b.pure_selections();
  CHECK(pure.size() == 3);
  for (const auto& s : pure) CHECK(s.source() == b.corr);
}

TEST_CASE("construction preconditions") {
  CHECK_THROWS_AS(build_counterexample(ws_for(2, 3), 2, Rational(0), 3, 1), DimensionError);
  Workspace small;
  small.dim = 3;
  CHECK_THROWS_AS(build_counterexample(small, 2, Rational(0), 3, 2), DimensionError);
}
