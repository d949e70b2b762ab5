#pragma once

#include <span>
#include <string>
#include <vector>

#include "corrint/rational.hpp"

namespace corrint {

/// Sorted, duplicate-free list of atom ids.
using AtomSet = std::vector<int>;

AtomSet make_atom_set(std::vector<int> atoms);
AtomSet set_intersection(const AtomSet& a, const AtomSet& b);

/// Finite probability space. Atom ids are 0..size()-1; every mass is strictly
/// positive and the masses sum to exactly one.
class DiscreteSpace {
 public:
  explicit DiscreteSpace(std::vector<Rational> masses, std::string label = {});

  static DiscreteSpace uniform(int atoms, std::string label = {});

  int size() const { return static_cast<int>(masses_.size()); }
  const Rational& mass(int atom) const;
  Rational mass_of(std::span<const int> atoms) const;
  const std::vector<Rational>& masses() const { return masses_; }
  const std::string& label() const { return label_; }

  friend bool operator==(const DiscreteSpace& a, const DiscreteSpace& b) {
    return a.masses_ == b.masses_;
  }

 private:
  std::vector<Rational> masses_;
  std::string label_;
};

/// A sigma-algebra on a finite space, stored as the partition of atoms into
/// its minimal non-empty sets. Blocks are sorted internally and ordered by
/// their smallest member.
class SigmaPartition {
 public:
  SigmaPartition(int atom_count, std::vector<AtomSet> blocks);

  static SigmaPartition singletons(int atom_count);
  static SigmaPartition trivial(int atom_count);
  /// One block per distinct label value; labels[i] is the label of atom i.
  static SigmaPartition from_labels(std::span<const int> labels);

  int atom_count() const { return static_cast<int>(block_of_.size()); }
  std::size_t block_count() const { return blocks_.size(); }
  const std::vector<AtomSet>& blocks() const { return blocks_; }
  const AtomSet& block(std::size_t i) const { return blocks_.at(i); }
  int block_of(int atom) const { return block_of_.at(static_cast<std::size_t>(atom)); }
  bool is_trivial() const { return blocks_.size() == 1; }

  friend bool operator==(const SigmaPartition& a, const SigmaPartition& b) {
    return a.blocks_ == b.blocks_;
  }

 private:
  std::vector<AtomSet> blocks_;
  std::vector<int> block_of_;
};

/// Equal-mass parts E_1..E_n, each independent of the conditioning partition.
struct SupplementPartition {
  std::vector<AtomSet> parts;
  int n() const { return static_cast<int>(parts.size()); }
};

/// The restricted space (D, T^D, lambda^D). Atoms are renumbered 0..|D|-1;
/// `original_ids[i]` is the id atom i had in the parent space.
struct Restriction {
  DiscreteSpace space;
  SigmaPartition partition;
  std::vector<int> original_ids;
};

/// True iff every block of `fine` lies inside a block of `coarse`.
bool is_refinement(const SigmaPartition& fine, const SigmaPartition& coarse);

/// Coarsest common refinement (the sigma-algebra generated by both).
SigmaPartition common_refinement(const SigmaPartition& a, const SigmaPartition& b);

/// Finite form of nowhere equivalence: every block of `f_alg` contains at
/// least two blocks of `t_alg`. Requires `t_alg` to refine `f_alg`.
bool is_nowhere_equivalent(const SigmaPartition& t_alg, const SigmaPartition& f_alg);

/// Splits every block of `f_alg` into `n` consecutive runs of equal mass (in
/// canonical atom order) and collects run j of every block into part E_j.
/// Throws DivisibilityError naming the first block that cannot be split.
SupplementPartition build_independent_supplement(const DiscreteSpace& space,
                                                 const SigmaPartition& f_alg, int n);

/// mass(s ∩ d) * total_mass == mass(s) * mass(d), exactly.
bool independence_product_check(const DiscreteSpace& space, const AtomSet& s, const AtomSet& d,
                                const Rational& total_mass);

Restriction restrict_space(const DiscreteSpace& space, const SigmaPartition& alg, const AtomSet& d);

}  // namespace corrint
