#include <doctest.h>

#include <random>

#include <corrint/errors.hpp>
#include <corrint/walsh.hpp>

#include "oracles.hpp"

using namespace corrint;

TEST_CASE("walsh_eval values") {
  CHECK(walsh_eval(0, 0.0) == 1);
  CHECK(walsh_eval(0, 0.63) == 1);
  CHECK(walsh_eval(1, 0.25) == 1);
  CHECK(walsh_eval(1, 0.75) == -1);
}

TEST_CASE("cell signs agree with the digit oracle") {
  for (int L = 0; L <= 8; ++L) {
    const std::uint64_t cells = std::uint64_t{1} << L;
    for (std::uint64_t n = 0; n < cells; ++n) {
      for (std::uint64_t c = 0; c < cells; ++c) {
        REQUIRE(walsh_cell_sign(n, c, L) == oracle::walsh_on_cell(n, c, L));
      }
    }
  }
  CHECK_THROWS_AS(walsh_cell_sign(4, 0, 2), DimensionError);
}

TEST_CASE("walsh integrals") {
  CHECK(walsh_integral(0, Rational(0), Rational(1), 0) == Rational(1));
  for (std::uint64_t n = 1; n < 32; ++n) CHECK(walsh_integral(n, Rational(0), Rational(1), 5) == Rational(0));
  CHECK(walsh_integral(1, Rational(0), Rational(1, 2), 1) == Rational(1, 2));
  CHECK(walsh_integral(3, Rational(1, 4), Rational(3, 4), 2) == Rational(-1, 2));
  CHECK_THROWS(walsh_integral(1, Rational(1, 3), Rational(1), 2));
}

TEST_CASE("walsh sets") {
  CHECK(walsh_set(0, 3).size() == 8);
  CHECK(walsh_set(1, 1) == std::vector<int>{0});
  for (std::uint64_t n = 1; n < 16; ++n) CHECK(walsh_set(n, 4).size() == 8);
}

TEST_CASE("walsh transform") {
  const std::vector<double> ones(8, 1.0);
  const auto c = walsh_transform(ones);
  CHECK(c[0] == 1.0);
  for (std::size_t n = 1; n < 8; ++n) CHECK(c[n] == 0.0);
  std::vector<double> w3(4);
  for (std::uint64_t cell = 0; cell < 4; ++cell) w3[cell] = oracle::walsh_on_cell(3, cell, 2);
  const auto c3 = walsh_transform(w3);
  CHECK(c3 == std::vector<double>{0.0, 0.0, 0.0, 1.0});
  CHECK_THROWS(walsh_transform(std::vector<double>(3, 1.0)));
}

TEST_CASE("inverse transform round trips on random step functions") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const int L = static_cast<int>(rng() % 9);
    std::vector<double> v(std::size_t{1} << L);
    for (auto& x : v) x = static_cast<double>(static_cast<int>(rng() % 2001) - 1000) / 64.0;
    const auto back = inverse_walsh_transform(walsh_transform(v));
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(back[i] == doctest::Approx(v[i]).epsilon(1e-12));
  }
}

TEST_CASE("integer orthogonality at level 8") {
  for (std::uint64_t m = 0; m < 16; ++m) {
    for (std::uint64_t n = 0; n < 16; ++n) {
      std::int64_t sum = 0;
      for (std::uint64_t c = 0; c < 256; ++c) sum += walsh_cell_sign(m, c, 8) * walsh_cell_sign(n, c, 8);
      CHECK(sum == (m == n ? 256 : 0));
    }
  }
}
