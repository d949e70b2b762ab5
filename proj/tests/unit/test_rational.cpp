#include <doctest.h>

#include <random>
#include <stdexcept>

#include <corrint/rational.hpp>

using corrint::Rational;

TEST_CASE("rational normalizes sign and lowest terms") {
  const Rational r(6, -8);
  CHECK(r.num() == -3);
  CHECK(r.den() == 4);
  CHECK(r.str() == "-3/4");
  CHECK(Rational(4, 2).str() == "2");
  CHECK_THROWS(Rational(1, 0));
}

TEST_CASE("rational parse round trips") {
  CHECK(Rational::parse(" 3/9 ") == Rational(1, 3));
  CHECK(Rational::parse("-7") == Rational(-7));
  CHECK_THROWS(Rational::parse("1/"));
  CHECK_THROWS(Rational::parse("abc"));
}

TEST_CASE("rational arithmetic and ordering") {
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(1, 3) - Rational(1, 2) == Rational(-1, 6));
  CHECK(Rational(2, 3) * Rational(9, 4) == Rational(3, 2));
  CHECK(Rational(2, 3) / Rational(4, 9) == Rational(3, 2));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(corrint::floor(Rational(-1, 2)) == -1);
  CHECK(corrint::floor(Rational(7, 2)) == 3);
  CHECK_THROWS(Rational(1) / Rational(0));
}

TEST_CASE("rational overflow throws instead of wrapping") {
  const Rational big(std::int64_t{1} << 62);
  CHECK_THROWS_AS(big * big, std::overflow_error);
}

TEST_CASE("rational field laws on random values") {
  std::mt19937_64 rng(17);
  auto draw = [&] {
    const auto n = static_cast<std::int64_t>(rng() % 2001) - 1000;
    const auto d = static_cast<std::int64_t>(rng() % 999) + 1;
    return Rational(n, d);
  };
  for (int i = 0; i < 500; ++i) {
    const Rational a = draw(), b = draw(), c = draw();
    CHECK((a + b) + c == a + (b + c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a - a == Rational(0));
    if (!b.is_zero()) CHECK((a / b) * b == a);
  }
}
