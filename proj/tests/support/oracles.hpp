#pragma once

// Reference computations written directly from the defining formulas. They
// share no code with the library beyond its value types.

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

#include <corrint/correspondence.hpp>
#include <corrint/rational.hpp>
#include <corrint/sequence_space.hpp>

namespace oracle {

using corrint::Rational;
using corrint::TruncVector;

/// j-th binary digit (j >= 1) of l in [0, 1), read from the expansion.
inline int binary_digit(double l, int j) {
  const double scaled = std::ldexp(l, j);
  return static_cast<int>(std::floor(scaled)) & 1;
}

/// W_n(l) = prod over set bits i of n of (-1)^{digit i+1 of l}.
inline int walsh(std::uint64_t n, double l) {
  int sign = 1;
  for (int i = 0; n >> i; ++i) {
    if ((n >> i) & 1U) sign *= binary_digit(l, i + 1) ? -1 : 1;
  }
  return sign;
}

/// Value of W_n on the c-th cell of level L, taken at the cell midpoint.
inline int walsh_on_cell(std::uint64_t n, std::uint64_t cell, int L) {
  return walsh(n, (static_cast<double>(cell) + 0.5) / std::ldexp(1.0, L));
}

/// psi_j on cell c: sum_{n <= N} 2^-n W_n x_{kn+j-1}, j = 1..k.
inline TruncVector psi_on_cell(int k, int j, int N, int L, std::uint64_t cell, std::size_t dim) {
  TruncVector v(dim);
  for (int n = 0; n <= N; ++n) {
    v[static_cast<std::size_t>(k * n + j - 1)] += std::ldexp(1.0, -n) * walsh_on_cell(static_cast<std::uint64_t>(n), cell, L);
  }
  return v;
}

/// e_j = (1 - gamma) * mean of psi_j over the 2^L cells.
inline TruncVector e_vector(int k, int j, int N, int L, double gamma, std::size_t dim) {
  TruncVector sum(dim);
  const std::uint64_t cells = std::uint64_t{1} << L;
  for (std::uint64_t c = 0; c < cells; ++c) sum += psi_on_cell(k, j, N, L, c, dim);
  return ((1.0 - gamma) / static_cast<double>(cells)) * sum;
}

inline double euclid(const TruncVector& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.dim(); ++i) s += v[i] * v[i];
  return std::sqrt(s);
}

inline double euclid_distance(const TruncVector& a, const TruncVector& b) { return euclid(a - b); }

/// Every alg-measurable selection integral, by odometer over atom choices.
/// `values[b]` are the values available on block b, `weights[b]` its mass.
inline std::vector<TruncVector> all_integrals(const std::vector<std::vector<TruncVector>>& values,
                                              const std::vector<double>& weights, std::size_t dim) {
  std::vector<TruncVector> out;
  std::vector<std::size_t> digit(values.size(), 0);
  while (true) {
    TruncVector s(dim);
    for (std::size_t b = 0; b < values.size(); ++b) s += weights[b] * values[b][digit[b]];
    out.push_back(s);
    std::size_t pos = 0;
    while (pos < values.size() && ++digit[pos] == values[pos].size()) digit[pos++] = 0;
    if (pos == values.size()) break;
  }
  return out;
}

inline double distance_to_set(const TruncVector& v, const std::vector<TruncVector>& set) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : set) best = std::min(best, euclid_distance(v, p));
  return best;
}

/// Directed Hausdorff semidistance sup_a inf_b |a - b|.
inline double semidistance(const std::vector<TruncVector>& a, const std::vector<TruncVector>& b) {
  double worst = 0.0;
  for (const auto& p : a) worst = std::max(worst, distance_to_set(p, b));
  return worst;
}

/// h(l, a, x_1..x_k, theta) with alpha a primitive (k+1)-th root of unity,
/// evaluated in complex arithmetic. Euclidean norm.
inline double payoff_h(double l, const TruncVector& a, const std::vector<TruncVector>& xs, double theta,
                       double gamma) {
  if (theta == 0.0 || l <= gamma) return 0.0;
  const int k = static_cast<int>(xs.size());
  const std::complex<double> alpha = std::polar(1.0, 2.0 * std::numbers::pi / (k + 1));
  const double ratio = (l - gamma) / theta;
  const auto q = static_cast<long long>(std::floor(ratio));
  auto power = [&](long long p) { return std::pow(alpha, static_cast<double>(p)); };
  TruncVector sum(a.dim());
  for (const auto& x : xs) sum += x;
  double value = theta * std::fabs(std::sin(ratio * std::numbers::pi)) * (euclid(a) + std::abs(1.0 - power(q)));
  for (int i = 1; i <= k; ++i) {
    const TruncVector m = (1.0 / (k + 1)) * (xs[static_cast<std::size_t>(i - 1)] + sum);
    value *= euclid(a - m) + std::abs(power(i) - power(q));
  }
  return value;
}

/// Per-n Walsh integrals of an integrand that is constant on d0-mesh
/// intervals of (gamma, 1], by midpoint sampling on a fine common grid of
/// the rescaled variable; the grid resolves both meshes exactly.
/// Returns sum_{n < 2^L} 2^-n |int integrand * W_n((l-gamma)/(1-gamma)) dl|.
inline double lemma_sum(const std::vector<int>& mesh_values, double gamma, double d0, int L, int fine_bits) {
  const std::uint64_t fine = std::uint64_t{1} << fine_bits;
  const double t1 = 1.0 - gamma;
  const std::uint64_t terms = std::uint64_t{1} << L;
  std::vector<double> integral(terms, 0.0);
  for (std::uint64_t s = 0; s < fine; ++s) {
    const double u = (static_cast<double>(s) + 0.5) / static_cast<double>(fine);
    const double l = gamma + t1 * u;
    const auto c = static_cast<std::size_t>(std::floor((l - gamma) / d0));
    if (c >= mesh_values.size() || mesh_values[c] == 0) continue;
    const double w = t1 / static_cast<double>(fine) * mesh_values[c];
    for (std::uint64_t n = 0; n < terms; ++n) integral[n] += w * walsh(n, u);
  }
  double total = 0.0;
  for (std::uint64_t n = 0; n < terms; ++n) total += std::ldexp(std::fabs(integral[n]), -static_cast<int>(n));
  return total;
}

}  // namespace oracle
