#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "corrint/correspondence.hpp"
#include "corrint/measure_space.hpp"
#include "corrint/rational.hpp"
#include "corrint/sequence_space.hpp"

namespace corrint {

namespace detail {
class KdTree;
}

/// Finite set of vectors, deduplicated on a 1e-12 lattice and stored in
/// lexicographic order of the lattice keys.
class PointCloudSet {
 public:
  explicit PointCloudSet(std::size_t dim, std::vector<TruncVector> points = {});
  /// Points given row-major in `flat` (size a multiple of dim).
  static PointCloudSet from_flat(std::size_t dim, const std::vector<double>& flat);

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  std::size_t dim() const { return dim_; }
  const std::vector<TruncVector>& points() const { return points_; }
  const TruncVector& operator[](std::size_t i) const { return points_[i]; }

  /// Distance from `v` to the closest point and that point's index.
  double distance_to(const TruncVector& v, const Metric& metric, std::size_t* index = nullptr) const;
  bool contains(const TruncVector& v, const Metric& metric, double tol = kMemberTol) const;

 private:
  std::size_t dim_;
  std::vector<TruncVector> points_;
  std::shared_ptr<const detail::KdTree> tree_;
};

/// One vector per block of `alg`.
struct BlockFunction {
  SigmaPartition alg;
  std::vector<TruncVector> values;

  const TruncVector& at_block(std::size_t b) const { return values.at(b); }
  /// The value on the block containing `atom`.
  const TruncVector& at_atom(int atom) const {
    return values.at(static_cast<std::size_t>(alg.block_of(atom)));
  }
};

/// Σ mass(t) f(t) over the atoms, in atom order.
TruncVector integrate_selection(const Selection& f);

/// E(f | g_alg) as block averages. g_alg must be coarser than f's algebra or
/// be any partition when f is atom-measurable.
BlockFunction conditional_expectation(const Selection& f, const SigmaPartition& g_alg);
BlockFunction conditional_expectation(const BlockFunction& f, const DiscreteSpace& space,
                                      const SigmaPartition& g_alg);

/// Spreads a block function back onto the atoms.
Selection lift(const BlockFunction& f, std::shared_ptr<const DiscreteSpace> space);

enum class SetMode { Enumerate, Minkowski };

struct SetOptions {
  /// Enumerate: bound on the number of selections. Minkowski: bound on the
  /// size of every intermediate point set.
  std::uint64_t cap = 1'000'000;
  SetMode mode = SetMode::Enumerate;
};

/// {∫ f : f an alg-measurable selection of corr}.
PointCloudSet aumann_integral_set(const Correspondence& corr, const SigmaPartition& alg,
                                  const SetOptions& options = {});

/// {E(f|g_alg) : f a t_alg-measurable selection}. Members are stored per
/// g-block; the set of functions is the product of the per-block sets.
class ConditionalSet {
 public:
  ConditionalSet(SigmaPartition g_alg, std::vector<Rational> block_masses,
                 std::vector<PointCloudSet> per_block);

  const SigmaPartition& g_alg() const { return g_alg_; }
  const std::vector<Rational>& block_masses() const { return block_masses_; }
  const PointCloudSet& block_set(std::size_t b) const { return per_block_.at(b); }
  std::size_t block_count() const { return per_block_.size(); }
  /// Number of member functions (product of block set sizes), saturating.
  std::uint64_t size() const;
  /// Member with the given mixed-radix index (first block slowest).
  BlockFunction member(std::uint64_t index) const;

  /// Σ_B mass(B) d(f_B, g_B).
  double function_distance(const BlockFunction& a, const BlockFunction& b, const Metric& metric) const;
  /// Distance from f to the closest member; it decomposes over blocks.
  double distance_to(const BlockFunction& f, const Metric& metric) const;
  bool contains(const BlockFunction& f, const Metric& metric, double tol = kMemberTol) const;

 private:
  SigmaPartition g_alg_;
  std::vector<Rational> block_masses_;
  std::vector<PointCloudSet> per_block_;
};

/// Throws PreconditionError unless t_alg refines g_alg.
ConditionalSet conditional_set(const Correspondence& corr, const SigmaPartition& t_alg,
                               const SigmaPartition& g_alg, const SetOptions& options = {});

/// Groups, inside every f_alg block, consecutive t_alg sub-blocks into parts
/// whose masses are weights[j] * mass(block). Part j collects the atoms
/// assigned to weight j across all blocks.
std::vector<AtomSet> lyapunov_partition(const DiscreteSpace& space, const SigmaPartition& f_alg,
                                        const SigmaPartition& t_alg,
                                        const std::vector<Rational>& weights);

/// g = f_j on part j of lyapunov_partition; t_alg-measurable.
Selection lyapunov_mix(const std::vector<Selection>& selections, const std::vector<Rational>& weights,
                       const SigmaPartition& f_alg, const SigmaPartition& t_alg);

inline constexpr std::uint64_t kDefaultGapSeed = 0x5eed'c0ffee'2024ULL;

/// Largest distance from a sampled convex combination of cloud points to the
/// cloud. Samples: midpoints of all coordinate-extreme points plus `samples`
/// random pairs and triples with low-discrepancy weights.
double convexity_gap(const PointCloudSet& cloud, int samples, const Metric& metric,
                     std::uint64_t seed = kDefaultGapSeed);

/// max_{p in a} min_{q in b} d(p, q).
double hausdorff_semidistance(const PointCloudSet& a, const PointCloudSet& b, const Metric& metric);
/// Same for conditional sets, with the block-mass weighted distance.
double hausdorff_semidistance(const ConditionalSet& a, const ConditionalSet& b, const Metric& metric);

/// σ(set(family[i]), set(limit)) for every i. Uses aumann_integral_set when
/// g_alg is trivial, conditional_set otherwise.
std::vector<double> uhc_diagnostic(const std::vector<std::shared_ptr<const Correspondence>>& family,
                                   const Correspondence& limit, const SigmaPartition& t_alg,
                                   const SigmaPartition& g_alg, const Metric& metric,
                                   const SetOptions& options = {});

}  // namespace corrint
