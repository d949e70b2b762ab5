#include "corrint/walsh.hpp"

#include <cmath>
#include <string>

#include "corrint/errors.hpp"

namespace corrint {

namespace {

constexpr int kMaxLevel = 40;

void require_level(std::uint64_t n, int level) {
  if (level < 0 || level > kMaxLevel) {
    throw DimensionError("dyadic level " + std::to_string(level) + " out of range");
  }
  if (level < bit_length(n)) {
    throw DimensionError("Walsh index " + std::to_string(n) + " needs level >= " +
                         std::to_string(bit_length(n)) + ", got " + std::to_string(level));
  }
}

std::int64_t aligned_index(const Rational& x, int level) {
  const Rational scaled = x * Rational(std::int64_t{1} << level);
  if (scaled.den() != 1) {
    throw DimensionError("endpoint " + x.str() + " is not aligned to level " + std::to_string(level));
  }
  return scaled.num();
}

}  // namespace

std::uint64_t reverse_bits(std::uint64_t cell, int level) {
  std::uint64_t out = 0;
  for (int i = 0; i < level; ++i) {
    out = (out << 1) | ((cell >> i) & 1U);
  }
  return out;
}

int walsh_eval(std::uint64_t n, double l) {
  if (!(l >= 0.0 && l <= 1.0)) throw PreconditionError("Walsh argument outside [0, 1]");
  const int a = bit_length(n);
  if (a == 0) return 1;
  std::uint64_t cell;
  if (l == 1.0) {
    cell = (std::uint64_t{1} << a) - 1;
  } else {
    cell = static_cast<std::uint64_t>(std::floor(std::ldexp(l, a)));
  }
  return walsh_cell_sign(n, cell, a);
}

int walsh_cell_sign(std::uint64_t n, std::uint64_t cell, int level) {
  require_level(n, level);
  // digit l_i of the cell's left endpoint is bit (level-1-i) of the index.
  const std::uint64_t digits = reverse_bits(cell, level);
  return (std::popcount(n & digits) & 1) ? -1 : 1;
}

Rational walsh_integral(std::uint64_t n, const Rational& lo, const Rational& hi, int level) {
  require_level(n, level);
  const std::int64_t p = aligned_index(lo, level);
  const std::int64_t q = aligned_index(hi, level);
  if (p < 0 || q > (std::int64_t{1} << level) || p > q) {
    throw DimensionError("interval [" + lo.str() + ", " + hi.str() + "] outside [0, 1]");
  }
  std::int64_t signed_cells = 0;
  for (std::int64_t c = p; c < q; ++c) signed_cells += walsh_cell_sign(n, static_cast<std::uint64_t>(c), level);
  return Rational(signed_cells, std::int64_t{1} << level);
}

std::vector<int> walsh_set(std::uint64_t n, int level) {
  require_level(n, level);
  std::vector<int> cells;
  const std::uint64_t count = std::uint64_t{1} << level;
  for (std::uint64_t c = 0; c < count; ++c) {
    if (walsh_cell_sign(n, c, level) == 1) cells.push_back(static_cast<int>(c));
  }
  return cells;
}

int checked_level_of(std::size_t length) {
  if (length == 0 || (length & (length - 1)) != 0) {
    throw DimensionError("Walsh transform length " + std::to_string(length) +
                         " is not a power of two");
  }
  return bit_length(length) - 1;
}

std::vector<double> walsh_transform(std::span<const double> step_values) {
  std::vector<double> out(step_values.begin(), step_values.end());
  paley_transform_inplace(out);
  const double scale = 1.0 / static_cast<double>(out.size());
  for (double& c : out) c *= scale;
  return out;
}

std::vector<double> inverse_walsh_transform(std::span<const double> coefficients) {
  // The Paley matrix is symmetric with entries +-1, so it is its own inverse
  // up to the 2^L factor already folded into the coefficients.
  std::vector<double> out(coefficients.begin(), coefficients.end());
  paley_transform_inplace(out);
  return out;
}

}  // namespace corrint
