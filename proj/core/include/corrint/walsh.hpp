#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "corrint/rational.hpp"

namespace corrint {

/// Number of binary digits of n (0 for n == 0).
inline int bit_length(std::uint64_t n) { return static_cast<int>(std::bit_width(n)); }

/// Reverses the low `level` bits of `cell`.
std::uint64_t reverse_bits(std::uint64_t cell, int level);

/// W_n(l) in Paley order, W_n(l) = (-1)^(n_0 l_0 + n_1 l_1 + ...), where l_i
/// is the (i+1)-th binary digit of l taken from its terminating expansion.
/// l == 1 is read as the last half-open cell. Requires 0 <= l <= 1.
int walsh_eval(std::uint64_t n, double l);

/// W_n on the half-open level-`level` cell [cell/2^L, (cell+1)/2^L).
/// Requires level >= bit_length(n).
int walsh_cell_sign(std::uint64_t n, std::uint64_t cell, int level);

/// Exact integral of W_n over [lo, hi]; both endpoints must be multiples of
/// 2^-level inside [0, 1] and level >= bit_length(n).
Rational walsh_integral(std::uint64_t n, const Rational& lo, const Rational& hi, int level);

/// Indices of the level cells where W_n = +1.
std::vector<int> walsh_set(std::uint64_t n, int level);

/// In-place unnormalized Walsh transform in Paley order:
/// out[n] = sum_cells values[cell] * W_n(cell). Length must be a power of two.
template <class T>
void paley_transform_inplace(std::vector<T>& values);

/// Coefficients <f, W_n> = 2^-L sum_cells f(cell) W_n(cell) for a step
/// function given by its 2^L cell values.
std::vector<double> walsh_transform(std::span<const double> step_values);

/// Rebuilds the cell values from Walsh coefficients.
std::vector<double> inverse_walsh_transform(std::span<const double> coefficients);

// ---------------------------------------------------------------------------

int checked_level_of(std::size_t length);

template <class T>
void paley_transform_inplace(std::vector<T>& values) {
  const int level = checked_level_of(values.size());
  // Paley order pairs the i-th index bit with the (i+1)-th binary digit of l,
  // which is the bit-reversed cell index; then a plain Hadamard butterfly.
  for (std::uint64_t i = 0; i < values.size(); ++i) {
    const std::uint64_t j = reverse_bits(i, level);
    if (i < j) std::swap(values[i], values[j]);
  }
  for (std::size_t half = 1; half < values.size(); half *= 2) {
    for (std::size_t start = 0; start < values.size(); start += 2 * half) {
      for (std::size_t i = start; i < start + half; ++i) {
        T a = values[i];
        T b = values[i + half];
        values[i] = a + b;
        values[i + half] = a - b;
      }
    }
  }
}

}  // namespace corrint
