#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "corrint/correspondence.hpp"
#include "corrint/measure_space.hpp"
#include "corrint/rational.hpp"
#include "corrint/sequence_space.hpp"

namespace corrint {

enum class Externality { Conditional, Integral };
enum class PayoffKind { Generic, Counterexample };
enum class EquilibriumMode { BrIterate, Exhaustive };

Externality parse_externality(std::string_view name);
EquilibriumMode parse_equilibrium_mode(std::string_view name);
std::string to_string(Externality e);
std::string to_string(EquilibriumMode m);

/// Societal aggregate: E(g|F) as one vector per f_alg block, or ∫g as a
/// single vector.
struct Aggregate {
  Externality kind = Externality::Integral;
  std::vector<TruncVector> values;

  /// The aggregate player `atom` of f-block `block` responds to.
  const TruncVector& seen_by(int block) const {
    return kind == Externality::Integral ? values.front() : values.at(static_cast<std::size_t>(block));
  }
};

/// payoff(atom, action, aggregate) for caller-defined games.
using GenericPayoff = std::function<double(int, const TruncVector&, const Aggregate&)>;

/// Action index played on every atom; constant on the blocks of t_alg.
struct StrategyProfile {
  std::vector<int> play;
};

/// A finite large game. Counterexample games implement
/// G(t)(a, b) = -h(phi(t), a, psi(phi(t)), beta * d(b, e_mean)) - ||a|| prod_i ||a - m_i(t)||
/// with m_i(t) = (psi_i + sum_j psi_j)(phi(t)) / (k+1).
class LargeGame {
 public:
  static LargeGame generic(std::shared_ptr<const DiscreteSpace> space, SigmaPartition f_alg,
                           SigmaPartition t_alg, std::vector<TruncVector> actions, GenericPayoff payoff,
                           Externality externality);

  /// Actions are 0, then m_i(cell) for every cell (cell-major, i = 1..k),
  /// then `extra_actions`; duplicates are dropped. With `coincide` the
  /// players' algebra is f_alg itself.
  static LargeGame counterexample(const CounterexampleBundle& bundle, NormFlavor flavor,
                                  std::vector<TruncVector> extra_actions = {}, bool coincide = false);

  PayoffKind kind() const { return kind_; }
  Externality externality() const { return externality_; }
  const DiscreteSpace& space() const { return *space_; }
  const std::shared_ptr<const DiscreteSpace>& space_ptr() const { return space_; }
  const SigmaPartition& f_alg() const { return f_alg_; }
  const SigmaPartition& t_alg() const { return t_alg_; }
  const std::vector<TruncVector>& actions() const { return actions_; }
  std::size_t action_count() const { return actions_.size(); }
  std::size_t dim() const { return actions_.front().dim(); }
  NormFlavor flavor() const { return flavor_; }

  // Counterexample parameters (meaningless for generic games).
  int k() const { return k_; }
  const Rational& gamma() const { return gamma_; }
  double M() const { return M_; }
  double beta() const { return beta_; }
  const TruncVector& e_mean() const { return e_mean_; }
  const std::optional<DyadicModel>& model() const { return model_; }
  double phi(int atom) const;
  /// psi_1..psi_k evaluated at phi(atom).
  const std::vector<TruncVector>& psi_at(int atom) const;
  /// m_1..m_k at phi(atom).
  const std::vector<TruncVector>& mixed_at(int atom) const;

  /// Payoff of playing action `a` against aggregate `b`.
  double payoff(int atom, std::size_t action, const Aggregate& b) const;
  const GenericPayoff& generic_payoff() const { return generic_; }

 private:
  LargeGame() = default;
  void validate() const;

  PayoffKind kind_ = PayoffKind::Generic;
  Externality externality_ = Externality::Integral;
  std::shared_ptr<const DiscreteSpace> space_;
  SigmaPartition f_alg_ = SigmaPartition::trivial(1);
  SigmaPartition t_alg_ = SigmaPartition::trivial(1);
  std::vector<TruncVector> actions_;
  GenericPayoff generic_;
  NormFlavor flavor_ = NormFlavor::Euclid;

  int k_ = 0;
  Rational gamma_;
  double M_ = 0.0;
  double beta_ = 0.0;
  TruncVector e_mean_;
  std::optional<DyadicModel> model_;
  std::vector<std::vector<TruncVector>> psi_;    // per atom
  std::vector<std::vector<TruncVector>> mixed_;  // per atom
  // Per atom and action: ||a|| and ||a - m_i|| (i = 1..k).
  std::vector<std::vector<double>> norm_a_;
  std::vector<std::vector<std::vector<double>>> dist_m_;
};

/// h(l, a, x_1..x_k, theta) with floor((l - gamma) / theta) indexing powers
/// of a primitive (k+1)-th root of unity.
double payoff_h(double l, const TruncVector& a, const std::vector<TruncVector>& xs, double theta,
                double gamma, NormFlavor flavor);

/// G(t)(a, b) for a counterexample game and an arbitrary vector a.
double payoff_G(const LargeGame& game, int atom, const TruncVector& a, const TruncVector& b);

/// Argmax action indices at tie tolerance 1e-10, ascending.
std::vector<int> best_response(const LargeGame& game, int atom, const Aggregate& b);

Aggregate aggregate_of(const LargeGame& game, const StrategyProfile& profile);

/// Largest regret max_a G(t)(a, b) - G(t)(g(t), b) with b the profile's own
/// aggregate.
double residual(const LargeGame& game, const StrategyProfile& profile);

enum class InitialAggregate { Default, Zero, Mean, Custom };

struct EquilibriumOptions {
  EquilibriumMode mode = EquilibriumMode::BrIterate;
  int max_iter = 50;
  double tol = 1e-9;
  /// Weight on the new aggregate in BR_ITERATE (1 is pure best response).
  double damping = 1.0;
  /// Default starts counterexample games at e_mean and generic games at 0.
  InitialAggregate initial = InitialAggregate::Default;
  std::optional<Aggregate> custom_initial;
  std::uint64_t cap = 20'000'000;
};

struct TraceStep {
  int iteration = 0;
  double residual = 0.0;
  /// ||b - e_mean|| for counterexample games, ||b - previous b|| otherwise.
  double distance = 0.0;
};

struct IndependenceRow {
  int part = 0;
  std::uint64_t walsh_index = 0;
  Rational lhs;
  Rational rhs;
  bool pass = false;
};

struct LemmaBound {
  double sum = 0.0;
  double bound = 0.0;
  bool pass = false;
};

struct EquilibriumReport {
  double residual = 0.0;
  Aggregate aggregate;
  int iterations = 0;
  bool converged = false;
  std::vector<TraceStep> trace;
  /// Counterexample games: ||aggregate - e_mean|| and whether it is within 1e-12.
  double distance_to_mean = 0.0;
  bool exact_case2 = false;

  // Filled by verify_equilibrium_partition.
  bool partition_checked = false;
  bool not_applicable = false;
  std::vector<Rational> partition_masses;
  bool masses_pass = false;
  std::vector<IndependenceRow> independence_table;
  bool independence_pass = false;
  std::optional<LemmaBound> lemma_bound;
};

struct EquilibriumResult {
  StrategyProfile profile;
  EquilibriumReport report;
};

EquilibriumResult find_equilibrium(const LargeGame& game, const EquilibriumOptions& options = {});

/// Every t_alg-measurable profile with residual <= tol (enumeration order).
std::vector<StrategyProfile> equilibrium_set(const LargeGame& game, double tol, std::uint64_t cap);

/// Partition P_0..P_k of T1 by the mixed point each player uses, with exact
/// masses and independence rows against the Walsh sets D_n, 1 <= n < 2^L.
EquilibriumReport verify_equilibrium_partition(const LargeGame& game, const StrategyProfile& profile);

/// q_1..q_k as indicators on the d0-mesh of (gamma, 1]: cells[i][c] is
/// q_{i+1} on the c-th mesh interval.
struct QSystem {
  int k = 1;
  Rational gamma;
  Rational d0;
  std::vector<std::vector<bool>> cells;
  std::size_t mesh_count() const { return cells.empty() ? 0 : cells.front().size(); }
};

/// Number of d0-mesh intervals covering (gamma, 1].
std::size_t q_mesh_count(const Rational& gamma, const Rational& d0);

/// labels[c] in 0..k: q_i marks the mesh intervals labelled i, label 0 is
/// left uncovered.
QSystem q_system_from_labels(int k, const Rational& gamma, const Rational& d0, const std::vector<int>& labels);

/// Mesh interval c is labelled (c + phase) mod (k+1); q_i marks label i.
QSystem canonical_q_system(int k, const Rational& gamma, const Rational& d0, int phase = 0);

/// max_i Σ_{n < 2^L} 2^-n |∫_(gamma,1] [q_i + Σ_j q_j - 1] W_n((l-gamma)/(1-gamma)) dl|
/// against 4 * d0. Throws PreconditionError on overlapping supports.
LemmaBound lemma_bound_check(const QSystem& q, int L);

}  // namespace corrint
