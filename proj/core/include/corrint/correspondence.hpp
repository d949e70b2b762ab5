#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "corrint/measure_space.hpp"
#include "corrint/rational.hpp"
#include "corrint/sequence_space.hpp"

namespace corrint {

/// Coordinates closer than this are the same point.
inline constexpr double kDedupTol = 1e-12;
/// Tolerance for "v belongs to a computed set".
inline constexpr double kMemberTol = 1e-9;

bool nearly_equal(const TruncVector& a, const TruncVector& b, double tol = kDedupTol);

/// Finite-valued correspondence on a discrete space: atom -> non-empty finite
/// set of vectors. Value sets are deduplicated, first occurrence kept.
class Correspondence {
 public:
  Correspondence(std::shared_ptr<const DiscreteSpace> space,
                 std::vector<std::vector<TruncVector>> values);

  const DiscreteSpace& space() const { return *space_; }
  const std::shared_ptr<const DiscreteSpace>& space_ptr() const { return space_; }
  const std::vector<TruncVector>& values(int atom) const;
  std::size_t dim() const { return dim_; }
  /// max over atoms and values of the norm.
  double bound(NormFlavor flavor) const;
  bool contains(int atom, const TruncVector& v, double tol = kDedupTol) const;

 private:
  std::shared_ptr<const DiscreteSpace> space_;
  std::vector<std::vector<TruncVector>> values_;
  std::size_t dim_ = 0;
};

/// A measurable map atom -> vector, constant on every block of `alg`. When
/// built from a correspondence it is also checked to be a selection of it.
class Selection {
 public:
  Selection(std::shared_ptr<const Correspondence> source, SigmaPartition alg,
            std::vector<TruncVector> choice);
  /// A plain measurable function (the selection of its own graph).
  Selection(std::shared_ptr<const DiscreteSpace> space, SigmaPartition alg,
            std::vector<TruncVector> choice);

  const DiscreteSpace& space() const { return *space_; }
  const std::shared_ptr<const DiscreteSpace>& space_ptr() const { return space_; }
  const SigmaPartition& alg() const { return alg_; }
  const std::vector<TruncVector>& choice() const { return choice_; }
  const TruncVector& at(int atom) const { return choice_.at(static_cast<std::size_t>(atom)); }
  std::size_t dim() const { return choice_.front().dim(); }
  /// The correspondence this selects from, or nullptr for plain functions.
  const std::shared_ptr<const Correspondence>& source() const { return source_; }

 private:
  void validate() const;

  std::shared_ptr<const DiscreteSpace> space_;
  std::shared_ptr<const Correspondence> source_;
  SigmaPartition alg_;
  std::vector<TruncVector> choice_;
};

/// True iff atoms sharing a block of `alg` have equal value sets.
bool check_measurable(const Correspondence& corr, const SigmaPartition& alg);

/// Values available to an alg-measurable selection on each block: the
/// intersection of the value sets of the block's atoms.
std::vector<std::vector<TruncVector>> per_block_choices(const Correspondence& corr,
                                                        const SigmaPartition& alg);

/// Exact product of per-block choice counts, as a decimal string.
std::string selection_count(const Correspondence& corr, const SigmaPartition& alg);

/// Lazily enumerates every alg-measurable selection exactly once, in
/// lexicographic order of per-block choice indices (first block slowest).
class SelectionStream {
 public:
  SelectionStream(std::shared_ptr<const Correspondence> corr, SigmaPartition alg,
                  std::uint64_t cap);

  std::uint64_t count() const { return count_; }
  std::optional<Selection> next();
  /// Choice indices of the selection returned by the last next().
  const std::vector<int>& indices() const { return digits_; }
  const std::vector<std::vector<TruncVector>>& choices() const { return choices_; }

 private:
  std::shared_ptr<const Correspondence> corr_;
  SigmaPartition alg_;
  std::vector<std::vector<TruncVector>> choices_;
  std::vector<int> digits_;
  std::uint64_t count_ = 0;
  std::uint64_t emitted_ = 0;
};

SelectionStream enumerate_selections(std::shared_ptr<const Correspondence> corr,
                                     const SigmaPartition& alg, std::uint64_t cap);

// ---------------------------------------------------------------------------
// Dyadic model of T = T2 ∪ T1 and the Walsh-series constructions on it.

/// T2 = [0, gamma] (one F-block when gamma > 0) followed by the 2^L dyadic
/// cells of (gamma, 1]. Every F-block is split into `per_block` equal atoms;
/// t_alg is the atom partition. phi maps T2 to gamma/2 and a cell's atoms to
/// the cell midpoint.
struct DyadicModel {
  std::shared_ptr<const DiscreteSpace> space;
  SigmaPartition f_alg = SigmaPartition::trivial(1);
  SigmaPartition t_alg = SigmaPartition::trivial(1);
  Rational gamma;
  int level = 0;
  int per_block = 1;
  std::vector<int> cell_of_atom;  // -1 on T2

  int cell_count() const { return 1 << level; }
  double phi(int atom) const;
  Rational t1_mass() const { return Rational(1) - gamma; }
  AtomSet t1_atoms() const;
  AtomSet t2_atoms() const;
  /// T1 atoms whose cell is listed in `cells`.
  AtomSet atoms_in_cells(const std::vector<int>& cells) const;
};

DyadicModel build_dyadic_model(const Rational& gamma, int level, int per_block);

/// Map I -> X that vanishes on [0, gamma] and is constant on the level-L
/// cells of (gamma, 1]. Evaluation snaps to the containing cell.
class StepFunction {
 public:
  StepFunction(Rational gamma, int level, std::vector<TruncVector> cells);

  const Rational& gamma() const { return gamma_; }
  int level() const { return level_; }
  std::size_t dim() const { return cells_.front().dim(); }
  const TruncVector& cell_value(int cell) const { return cells_.at(static_cast<std::size_t>(cell)); }
  const std::vector<TruncVector>& cells() const { return cells_; }
  TruncVector eval(double l) const;
  /// ∫_I f dη.
  TruncVector integral() const;

 private:
  Rational gamma_;
  int level_;
  std::vector<TruncVector> cells_;
};

/// The series f_j(l) = sum_{n<=N} x_{kn+j-1} 2^-n W_n((l-gamma)/(1-gamma))
/// on (gamma, 1] (unit basis vectors, so the norm denominators are 1).
std::vector<StepFunction> build_psi(const Workspace& ws, int k, const Rational& gamma, int N, int L);

struct CounterexampleBundle {
  int k = 1;
  Rational gamma;
  int N = 0;
  int L = 0;
  DyadicModel model;
  std::vector<StepFunction> f_list;
  std::vector<TruncVector> e_list;
  /// F(t) = {0, f_1(phi(t)), ..., f_k(phi(t))}.
  std::shared_ptr<const Correspondence> corr;

  /// (e_1 + ... + e_k) / (k+1).
  TruncVector e_mean() const;
  /// The F-measurable selections t -> 0 (index 0) and t -> f_j(phi(t)).
  std::vector<Selection> pure_selections() const;
};

CounterexampleBundle build_counterexample(const Workspace& ws, int k, const Rational& gamma, int N,
                                          int L, int per_block = 1);

}  // namespace corrint
