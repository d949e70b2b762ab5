#include <doctest.h>

#include <corrint/rcd.hpp>
#include <corrint/serialize.hpp>

using namespace corrint;

namespace {
TruncVector V(std::vector<double> c) { return TruncVector(std::move(c)); }
}

TEST_CASE("value types round trip through JSON") {
  CHECK(rational_from_json(to_json(Rational(-3, 7))) == Rational(-3, 7));
  CHECK(to_json(Rational(1, 4)).get<std::string>() == "1/4");
  const DiscreteSpace s({Rational(1, 3), Rational(2, 3)}, "two");
  CHECK(space_from_json(to_json(s)) == s);
  const SigmaPartition p(4, {{0, 3}, {1, 2}});
  CHECK(partition_from_json(to_json(p), 4) == p);
  CHECK(vector_from_json(to_json(V({0.1, -2.5}))) == V({0.1, -2.5}));
  auto space = std::make_shared<const DiscreteSpace>(s);
  const Correspondence c(space, {{V({1, 0}), V({0, 1})}, {V({2, 2})}});
  const auto back = correspondence_from_json(to_json(c));
  CHECK(back.values(0) == c.values(0));
  CHECK(back.values(1) == c.values(1));
  CHECK(correspondence_hash(back) == correspondence_hash(c));
}

TEST_CASE("kernels round trip") {
  auto space = std::make_shared<const DiscreteSpace>(DiscreteSpace::uniform(4));
  const SigmaPartition g(4, {{0, 1}, {2, 3}});
  const Selection f(space, SigmaPartition::singletons(4), {V({1}), V({2}), V({3}), V({3})});
  const auto k = rcd_of_selection(f, g);
  CHECK(kernel_from_json(to_json(k), *space, g) == k);
}

TEST_CASE("doubles print shortest round trip") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(2.0) == "2");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("malformed JSON values are rejected") {
  CHECK_THROWS(rational_from_json(Json(3.5)));
  CHECK_THROWS(partition_from_json(Json::parse("[[0,1],[1]]"), 2));
  CHECK_THROWS(space_from_json(Json::parse(R"({"masses": ["1/2", "1/3"]})")));
}
