#pragma once

#include <vector>

#include "corrint/correspondence.hpp"
#include "corrint/measure_space.hpp"
#include "corrint/rational.hpp"
#include "corrint/set_integration.hpp"

namespace corrint {

/// Finite distribution on X: distinct support points with exact weights.
struct KernelBlock {
  std::vector<TruncVector> support;
  std::vector<Rational> weights;
};

/// A transition kernel constant on the blocks of g_alg: one finitely
/// supported distribution per block. Support points are merged at 1e-12 and
/// sorted, so equal kernels compare equal.
class TransitionKernel {
 public:
  TransitionKernel(SigmaPartition g_alg, std::vector<Rational> block_masses,
                   std::vector<KernelBlock> blocks);

  const SigmaPartition& g_alg() const { return g_alg_; }
  const std::vector<Rational>& block_masses() const { return block_masses_; }
  const std::vector<KernelBlock>& blocks() const { return blocks_; }
  const KernelBlock& block(std::size_t b) const { return blocks_.at(b); }

  /// Same blocks, supports equal at 1e-12 and weights exactly equal.
  friend bool operator==(const TransitionKernel& a, const TransitionKernel& b);

 private:
  SigmaPartition g_alg_;
  std::vector<Rational> block_masses_;
  std::vector<KernelBlock> blocks_;
};

/// Per block B of g_alg, the law of f on B under mass(t)/mass(B).
TransitionKernel rcd_of_selection(const Selection& f, const SigmaPartition& g_alg);

/// ∫ x φ(t, dx) per block.
BlockFunction barycenter(const TransitionKernel& kernel);

/// alpha * k1 + (1 - alpha) * k2, blockwise.
TransitionKernel kernel_mix(const TransitionKernel& k1, const TransitionKernel& k2, const Rational& alpha);

/// Test family {1_B(t) clip(x_m, ±R_j)} over blocks B, coordinates m and
/// clip levels R_j = clip_bound * j / clip_levels (j = 1..clip_levels), plus
/// the constant 1. Returns max |∫∫ c dk1 dλ - ∫∫ c dk2 dλ|.
double kernel_distance(const TransitionKernel& k1, const TransitionKernel& k2, double clip_bound,
                       int clip_levels);

struct SeparationReport {
  double distance = 0.0;
  bool kernels_equal = false;
  /// False when the kernels differ but the test family gives distance 0.
  bool separated = true;
  /// Blocks whose distributions differ yet no test function tells them apart.
  std::vector<int> unseparated_blocks;
};

SeparationReport kernel_separation(const TransitionKernel& k1, const TransitionKernel& k2,
                                   double clip_bound, int clip_levels);

}  // namespace corrint
