#include "corrint/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "corrint/errors.hpp"
#include "corrint/parallel.hpp"
#include "corrint/walsh.hpp"

namespace corrint {

namespace {

constexpr double kTieTol = 1e-10;

/// |alpha^p - alpha^q| for a primitive (k+1)-th root alpha.
double root_gap(double p, double q, int k) {
  return 2.0 * std::fabs(std::sin(std::numbers::pi * (p - q) / (k + 1)));
}

/// h given ||a|| and ||a - m_i||; offset is l - gamma.
double h_from_terms(double offset, double theta, int k, double norm_a, const std::vector<double>& dist) {
  if (theta == 0.0 || offset <= 0.0) return 0.0;
  const double x = offset / theta;
  const double q = std::fmod(std::floor(x), static_cast<double>(k + 1));
  double value = theta * std::fabs(std::sin(x * std::numbers::pi)) * (norm_a + root_gap(0.0, q, k));
  for (int i = 1; i <= k; ++i) value *= dist[static_cast<std::size_t>(i - 1)] + root_gap(i, q, k);
  return value;
}

std::vector<TruncVector> mixed_points(const std::vector<TruncVector>& xs) {
  const std::size_t k = xs.size();
  TruncVector sum(xs.front().dim());
  for (const auto& x : xs) sum += x;
  std::vector<TruncVector> out;
  for (const auto& x : xs) {
    TruncVector m(x.dim());
    for (std::size_t c = 0; c < x.dim(); ++c) m[c] = (x[c] + sum[c]) / static_cast<double>(k + 1);
    out.push_back(std::move(m));
  }
  return out;
}

void push_unique(std::vector<TruncVector>& actions, const TruncVector& v) {
  for (const auto& a : actions) {
    if (nearly_equal(a, v)) return;
  }
  actions.push_back(v);
}

/// Rank of each atom's t_alg block among the t_alg blocks of its f_alg block.
std::vector<int> block_ranks(const SigmaPartition& t_alg, const SigmaPartition& f_alg) {
  std::vector<int> seen(f_alg.block_count(), 0);
  std::vector<int> rank(static_cast<std::size_t>(t_alg.atom_count()), 0);
  for (const auto& block : t_alg.blocks()) {
    const auto fb = static_cast<std::size_t>(f_alg.block_of(block.front()));
    for (int t : block) rank[static_cast<std::size_t>(t)] = seen[fb];
    ++seen[fb];
  }
  return rank;
}

StrategyProfile profile_from_blocks(const LargeGame& game, const std::vector<int>& per_block) {
  StrategyProfile p;
  p.play.assign(static_cast<std::size_t>(game.space().size()), 0);
  for (std::size_t b = 0; b < game.t_alg().block_count(); ++b) {
    for (int t : game.t_alg().block(b)) p.play[static_cast<std::size_t>(t)] = per_block[b];
  }
  return p;
}

double distance_to_mean(const LargeGame& game, const Aggregate& b) {
  if (game.kind() != PayoffKind::Counterexample) return 0.0;
  return norm(b.values.front() - game.e_mean(), game.flavor());
}

/// Regret of the block representative for every t_alg block.
double block_residual(const LargeGame& game, const std::vector<int>& per_block, const Aggregate& b) {
  double worst = 0.0;
  for (std::size_t tb = 0; tb < game.t_alg().block_count(); ++tb) {
    const int t = game.t_alg().block(tb).front();
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < game.action_count(); ++a) best = std::max(best, game.payoff(t, a, b));
    worst = std::max(worst, best - game.payoff(t, static_cast<std::size_t>(per_block[tb]), b));
  }
  return worst;
}

Aggregate block_aggregate(const LargeGame& game, const std::vector<int>& per_block) {
  const DiscreteSpace& space = game.space();
  const std::size_t dim = game.dim();
  Aggregate out;
  out.kind = game.externality();
  if (out.kind == Externality::Integral) {
    TruncVector sum(dim);
    for (std::size_t tb = 0; tb < game.t_alg().block_count(); ++tb) {
      const double w = space.mass_of(game.t_alg().block(tb)).to_double();
      const TruncVector& a = game.actions()[static_cast<std::size_t>(per_block[tb])];
      for (std::size_t m = 0; m < dim; ++m) sum[m] += w * a[m];
    }
    out.values.push_back(std::move(sum));
    return out;
  }
  out.values.assign(game.f_alg().block_count(), TruncVector(dim));
  std::vector<Rational> f_mass;
  for (const auto& fb : game.f_alg().blocks()) f_mass.push_back(space.mass_of(fb));
  for (std::size_t tb = 0; tb < game.t_alg().block_count(); ++tb) {
    const AtomSet& block = game.t_alg().block(tb);
    const auto fb = static_cast<std::size_t>(game.f_alg().block_of(block.front()));
    const double w = (space.mass_of(block) / f_mass[fb]).to_double();
    const TruncVector& a = game.actions()[static_cast<std::size_t>(per_block[tb])];
    for (std::size_t m = 0; m < dim; ++m) out.values[fb][m] += w * a[m];
  }
  return out;
}

std::vector<int> per_block_play(const LargeGame& game, const StrategyProfile& profile) {
  if (profile.play.size() != static_cast<std::size_t>(game.space().size())) {
    throw StructuralError("profile does not cover the players");
  }
  std::vector<int> out;
  for (const auto& block : game.t_alg().blocks()) {
    const int a = profile.play[static_cast<std::size_t>(block.front())];
    if (a < 0 || static_cast<std::size_t>(a) >= game.action_count()) {
      throw PreconditionError("profile uses an invalid action index");
    }
    for (int t : block) {
      if (profile.play[static_cast<std::size_t>(t)] != a) {
        throw PreconditionError("profile is not measurable with respect to the players' algebra");
      }
    }
    out.push_back(a);
  }
  return out;
}

std::uint64_t checked_profile_count(const LargeGame& game, std::uint64_t cap) {
  const std::size_t blocks = game.t_alg().block_count();
  const std::size_t actions = game.action_count();
  std::vector<std::size_t> sizes(blocks, actions);
  unsigned __int128 total = 1;
  bool overflow = false;
  for (std::size_t i = 0; i < blocks; ++i) {
    total *= actions;
    if (total > std::numeric_limits<std::uint64_t>::max()) {
      overflow = true;
      break;
    }
  }
  if (overflow || total > cap) {
    // Exact decimal count, |A|^blocks.
    std::vector<std::uint32_t> limbs{1};
    for (std::size_t i = 0; i < blocks; ++i) {
      std::uint64_t carry = 0;
      for (auto& limb : limbs) {
        const std::uint64_t cur = static_cast<std::uint64_t>(limb) * actions + carry;
        limb = static_cast<std::uint32_t>(cur % 1000000000ULL);
        carry = cur / 1000000000ULL;
      }
      while (carry) {
        limbs.push_back(static_cast<std::uint32_t>(carry % 1000000000ULL));
        carry /= 1000000000ULL;
      }
    }
    std::string exact = std::to_string(limbs.back());
    for (std::size_t i = limbs.size() - 1; i-- > 0;) {
      std::string part = std::to_string(limbs[i]);
      exact += std::string(9 - part.size(), '0') + part;
    }
    throw CapacityError("exhaustive search needs " + exact + " profiles, cap is " + std::to_string(cap), exact);
  }
  return static_cast<std::uint64_t>(total);
}

void decode_profile(std::uint64_t index, std::size_t actions, std::vector<int>& digits) {
  for (std::size_t b = digits.size(); b-- > 0;) {
    digits[b] = static_cast<int>(index % actions);
    index /= actions;
  }
}

}  // namespace

// ---------------------------------------------------------------------------

Externality parse_externality(std::string_view name) {
  if (name == "CONDITIONAL") return Externality::Conditional;
  if (name == "INTEGRAL") return Externality::Integral;
  throw PreconditionError("unknown externality '" + std::string(name) + "'");
}

EquilibriumMode parse_equilibrium_mode(std::string_view name) {
  if (name == "BR_ITERATE") return EquilibriumMode::BrIterate;
  if (name == "EXHAUSTIVE") return EquilibriumMode::Exhaustive;
  throw PreconditionError("unknown equilibrium mode '" + std::string(name) + "'");
}

std::string to_string(Externality e) { return e == Externality::Conditional ? "CONDITIONAL" : "INTEGRAL"; }
std::string to_string(EquilibriumMode m) { return m == EquilibriumMode::BrIterate ? "BR_ITERATE" : "EXHAUSTIVE"; }

LargeGame LargeGame::generic(std::shared_ptr<const DiscreteSpace> space, SigmaPartition f_alg,
                             SigmaPartition t_alg, std::vector<TruncVector> actions, GenericPayoff payoff,
                             Externality externality) {
  LargeGame g;
  g.kind_ = PayoffKind::Generic;
  g.space_ = std::move(space);
  g.f_alg_ = std::move(f_alg);
  g.t_alg_ = std::move(t_alg);
  g.actions_ = std::move(actions);
  g.generic_ = std::move(payoff);
  g.externality_ = externality;
  if (!g.generic_) throw PreconditionError("generic game without a payoff");
  g.validate();
  return g;
}

LargeGame LargeGame::counterexample(const CounterexampleBundle& bundle, NormFlavor flavor,
                                    std::vector<TruncVector> extra_actions, bool coincide) {
  LargeGame g;
  g.kind_ = PayoffKind::Counterexample;
  g.externality_ = Externality::Integral;
  g.flavor_ = flavor;
  g.model_ = bundle.model;
  g.space_ = bundle.model.space;
  g.f_alg_ = bundle.model.f_alg;
  g.t_alg_ = coincide ? bundle.model.f_alg : bundle.model.t_alg;
  g.k_ = bundle.k;
  g.gamma_ = bundle.gamma;
  g.e_mean_ = bundle.e_mean();

  const std::size_t dim = bundle.corr->dim();
  const int cells = bundle.model.cell_count();
  std::vector<std::vector<TruncVector>> psi_cell(static_cast<std::size_t>(cells));
  std::vector<std::vector<TruncVector>> mixed_cell(static_cast<std::size_t>(cells));
  for (int c = 0; c < cells; ++c) {
    for (const auto& f : bundle.f_list) psi_cell[static_cast<std::size_t>(c)].push_back(f.cell_value(c));
    mixed_cell[static_cast<std::size_t>(c)] = mixed_points(psi_cell[static_cast<std::size_t>(c)]);
  }
  const std::vector<TruncVector> zeros(static_cast<std::size_t>(g.k_), TruncVector(dim));
  const std::vector<TruncVector> zero_mixed = mixed_points(zeros);

  g.actions_.push_back(TruncVector(dim));
  for (int c = 0; c < cells; ++c) {
    for (const auto& m : mixed_cell[static_cast<std::size_t>(c)]) push_unique(g.actions_, m);
  }
  for (const auto& extra : extra_actions) {
    if (extra.dim() != dim) throw DimensionError("extra action has the wrong dimension");
    push_unique(g.actions_, extra);
  }

  double M = 0.0;
  for (const auto& a : g.actions_) M = std::max(M, norm(a, flavor));
  for (const auto& row : psi_cell) {
    for (const auto& v : row) M = std::max(M, norm(v, flavor));
  }
  for (const auto& e : bundle.e_list) M = std::max(M, norm(e, flavor));
  g.M_ = M;
  g.beta_ = g.model_->t1_mass().to_double() / (4.0 * M);

  const int atoms = g.space_->size();
  for (int t = 0; t < atoms; ++t) {
    const int c = bundle.model.cell_of_atom[static_cast<std::size_t>(t)];
    g.psi_.push_back(c < 0 ? zeros : psi_cell[static_cast<std::size_t>(c)]);
    g.mixed_.push_back(c < 0 ? zero_mixed : mixed_cell[static_cast<std::size_t>(c)]);
    std::vector<double> na;
    std::vector<std::vector<double>> dm;
    for (const auto& a : g.actions_) {
      na.push_back(norm(a, flavor));
      std::vector<double> d;
      for (const auto& m : g.mixed_.back()) d.push_back(norm(a - m, flavor));
      dm.push_back(std::move(d));
    }
    g.norm_a_.push_back(std::move(na));
    g.dist_m_.push_back(std::move(dm));
  }
  g.validate();
  return g;
}

void LargeGame::validate() const {
  if (!space_) throw StructuralError("game without players");
  if (f_alg_.atom_count() != space_->size() || t_alg_.atom_count() != space_->size()) {
    throw StructuralError("partition/space mismatch");
  }
  if (!is_refinement(t_alg_, f_alg_)) throw PreconditionError("players' algebra does not refine f_alg");
  if (actions_.empty()) throw PreconditionError("empty action set");
  for (const auto& a : actions_) {
    if (a.dim() != actions_.front().dim()) throw DimensionError("actions have different dimensions");
  }
}

double LargeGame::phi(int atom) const {
  if (!model_) throw PreconditionError("phi is only defined for counterexample games");
  return model_->phi(atom);
}

const std::vector<TruncVector>& LargeGame::psi_at(int atom) const { return psi_.at(static_cast<std::size_t>(atom)); }

const std::vector<TruncVector>& LargeGame::mixed_at(int atom) const {
  return mixed_.at(static_cast<std::size_t>(atom));
}

double LargeGame::payoff(int atom, std::size_t action, const Aggregate& b) const {
  if (kind_ == PayoffKind::Generic) return generic_(atom, actions_.at(action), b);
  const auto t = static_cast<std::size_t>(atom);
  const double theta = beta_ * norm(b.values.front() - e_mean_, flavor_);
  const double offset = (model_->phi(atom) - gamma_.to_double());
  const double na = norm_a_[t][action];
  double prod = na;
  for (double d : dist_m_[t][action]) prod *= d;
  return -h_from_terms(offset, theta, k_, na, dist_m_[t][action]) - prod;
}

double payoff_h(double l, const TruncVector& a, const std::vector<TruncVector>& xs, double theta, double gamma,
                NormFlavor flavor) {
  if (xs.empty()) throw PreconditionError("h needs at least one x_i");
  if (theta < 0.0) throw PreconditionError("theta must be non-negative");
  const auto ms = mixed_points(xs);
  std::vector<double> dist;
  for (const auto& m : ms) dist.push_back(norm(a - m, flavor));
  return h_from_terms(l - gamma, theta, static_cast<int>(xs.size()), norm(a, flavor), dist);
}

double payoff_G(const LargeGame& game, int atom, const TruncVector& a, const TruncVector& b) {
  if (game.kind() != PayoffKind::Counterexample) {
    throw PreconditionError("payoff_G is defined for counterexample games; use the generic payoff");
  }
  const double theta = game.beta() * norm(b - game.e_mean(), game.flavor());
  const double l = game.phi(atom);
  const double h = payoff_h(l, a, game.psi_at(atom), theta, game.gamma().to_double(), game.flavor());
  double prod = norm(a, game.flavor());
  for (const auto& m : game.mixed_at(atom)) prod *= norm(a - m, game.flavor());
  return -h - prod;
}

std::vector<int> best_response(const LargeGame& game, int atom, const Aggregate& b) {
  std::vector<double> values(game.action_count());
  for (std::size_t a = 0; a < values.size(); ++a) values[a] = game.payoff(atom, a, b);
  const double best = *std::max_element(values.begin(), values.end());
  std::vector<int> out;
  for (std::size_t a = 0; a < values.size(); ++a) {
    if (values[a] >= best - kTieTol) out.push_back(static_cast<int>(a));
  }
  return out;
}

Aggregate aggregate_of(const LargeGame& game, const StrategyProfile& profile) {
  return block_aggregate(game, per_block_play(game, profile));
}

double residual(const LargeGame& game, const StrategyProfile& profile) {
  const auto per_block = per_block_play(game, profile);
  return block_residual(game, per_block, block_aggregate(game, per_block));
}

// ---------------------------------------------------------------------------

namespace {

Aggregate initial_aggregate(const LargeGame& game, const EquilibriumOptions& options) {
  Aggregate b;
  b.kind = game.externality();
  const std::size_t count = b.kind == Externality::Integral ? 1 : game.f_alg().block_count();
  InitialAggregate mode = options.initial;
  if (mode == InitialAggregate::Default) {
    mode = game.kind() == PayoffKind::Counterexample ? InitialAggregate::Mean : InitialAggregate::Zero;
  }
  switch (mode) {
    case InitialAggregate::Custom:
      if (!options.custom_initial) throw PreconditionError("custom initial aggregate missing");
      b = *options.custom_initial;
      if (b.values.size() != count || b.kind != game.externality()) {
        throw StructuralError("custom initial aggregate has the wrong shape");
      }
      return b;
    case InitialAggregate::Mean:
      if (game.kind() != PayoffKind::Counterexample) throw PreconditionError("mean start needs a counterexample game");
      b.values.assign(count, game.e_mean());
      return b;
    default:
      b.values.assign(count, TruncVector(game.dim()));
      return b;
  }
}

EquilibriumReport base_report(const LargeGame& game, const std::vector<int>& per_block) {
  EquilibriumReport r;
  r.aggregate = block_aggregate(game, per_block);
  r.residual = block_residual(game, per_block, r.aggregate);
  r.distance_to_mean = distance_to_mean(game, r.aggregate);
  r.exact_case2 = game.kind() == PayoffKind::Counterexample && r.distance_to_mean <= kDedupTol;
  return r;
}

EquilibriumResult br_iterate(const LargeGame& game, const EquilibriumOptions& options) {
  const auto ranks = block_ranks(game.t_alg(), game.f_alg());
  const std::size_t blocks = game.t_alg().block_count();
  Aggregate b = initial_aggregate(game, options);

  std::vector<int> best_play;
  double best_residual = std::numeric_limits<double>::infinity();
  std::vector<TraceStep> trace;
  int iterations = 0;
  for (int it = 1; it <= options.max_iter; ++it) {
    iterations = it;
    std::vector<int> play(blocks);
    parallel_for(blocks, [&](std::size_t begin, std::size_t end) {
      for (std::size_t tb = begin; tb < end; ++tb) {
        const int t = game.t_alg().block(tb).front();
        const auto br = best_response(game, t, b);
        play[tb] = br[static_cast<std::size_t>(ranks[static_cast<std::size_t>(t)]) % br.size()];
      }
    });
    const Aggregate next = block_aggregate(game, play);
    const double res = block_residual(game, play, next);
    TraceStep step{it, res, 0.0};
    if (game.kind() == PayoffKind::Counterexample) {
      step.distance = distance_to_mean(game, next);
    } else {
      for (std::size_t i = 0; i < next.values.size(); ++i) {
        step.distance = std::max(step.distance, norm(next.values[i] - b.values[i], game.flavor()));
      }
    }
    trace.push_back(step);
    if (res < best_residual) {
      best_residual = res;
      best_play = play;
    }
    if (res <= options.tol) break;
    for (std::size_t i = 0; i < b.values.size(); ++i) {
      b.values[i] = options.damping * next.values[i] + (1.0 - options.damping) * b.values[i];
    }
  }

  EquilibriumResult out;
  out.profile = profile_from_blocks(game, best_play);
  out.report = base_report(game, best_play);
  out.report.iterations = iterations;
  out.report.converged = out.report.residual <= options.tol;
  out.report.trace = std::move(trace);
  return out;
}

EquilibriumResult exhaustive(const LargeGame& game, const EquilibriumOptions& options) {
  const std::uint64_t total = checked_profile_count(game, options.cap);
  const std::size_t blocks = game.t_alg().block_count();
  const std::size_t actions = game.action_count();
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::uint64_t>(thread_count(), total));
  const std::uint64_t chunk = (total + workers - 1) / workers;
  std::vector<double> chunk_best(workers, std::numeric_limits<double>::infinity());
  std::vector<std::uint64_t> chunk_arg(workers, 0);
  parallel_for(workers, [&](std::size_t wb, std::size_t we) {
    std::vector<int> digits(blocks);
    for (std::size_t w = wb; w < we; ++w) {
      const std::uint64_t begin = std::min<std::uint64_t>(total, w * chunk);
      const std::uint64_t end = std::min<std::uint64_t>(total, begin + chunk);
      for (std::uint64_t idx = begin; idx < end; ++idx) {
        decode_profile(idx, actions, digits);
        const double res = block_residual(game, digits, block_aggregate(game, digits));
        if (res < chunk_best[w]) {
          chunk_best[w] = res;
          chunk_arg[w] = idx;
        }
      }
    }
  });
  std::size_t winner = 0;
  for (std::size_t w = 1; w < workers; ++w) {
    if (chunk_best[w] < chunk_best[winner]) winner = w;
  }
  std::vector<int> digits(blocks);
  decode_profile(chunk_arg[winner], actions, digits);
  EquilibriumResult out;
  out.profile = profile_from_blocks(game, digits);
  out.report = base_report(game, digits);
  out.report.iterations = 0;
  out.report.converged = out.report.residual <= options.tol;
  return out;
}

}  // namespace

EquilibriumResult find_equilibrium(const LargeGame& game, const EquilibriumOptions& options) {
  if (options.max_iter < 1) throw PreconditionError("max_iter must be positive");
  if (!(options.damping > 0.0 && options.damping <= 1.0)) throw PreconditionError("damping must lie in (0, 1]");
  return options.mode == EquilibriumMode::BrIterate ? br_iterate(game, options) : exhaustive(game, options);
}

std::vector<StrategyProfile> equilibrium_set(const LargeGame& game, double tol, std::uint64_t cap) {
  const std::uint64_t total = checked_profile_count(game, cap);
  const std::size_t blocks = game.t_alg().block_count();
  const std::size_t actions = game.action_count();
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::uint64_t>(thread_count(), total));
  const std::uint64_t chunk = (total + workers - 1) / workers;
  std::vector<std::vector<std::vector<int>>> found(workers);
  parallel_for(workers, [&](std::size_t wb, std::size_t we) {
    std::vector<int> digits(blocks);
    for (std::size_t w = wb; w < we; ++w) {
      const std::uint64_t begin = std::min<std::uint64_t>(total, w * chunk);
      const std::uint64_t end = std::min<std::uint64_t>(total, begin + chunk);
      for (std::uint64_t idx = begin; idx < end; ++idx) {
        decode_profile(idx, actions, digits);
        if (block_residual(game, digits, block_aggregate(game, digits)) <= tol) found[w].push_back(digits);
      }
    }
  });
  std::vector<StrategyProfile> out;
  for (const auto& part : found) {
    for (const auto& d : part) out.push_back(profile_from_blocks(game, d));
  }
  return out;
}

EquilibriumReport verify_equilibrium_partition(const LargeGame& game, const StrategyProfile& profile) {
  if (game.kind() != PayoffKind::Counterexample) {
    throw PreconditionError("partition check needs a counterexample game");
  }
  const auto per_block = per_block_play(game, profile);
  EquilibriumReport r = base_report(game, per_block);
  r.partition_checked = true;
  const DyadicModel& model = *game.model();
  const DiscreteSpace& space = game.space();
  const int k = game.k();

  std::vector<AtomSet> parts(static_cast<std::size_t>(k + 1));
  for (int t : model.t1_atoms()) {
    const TruncVector& a = game.actions()[static_cast<std::size_t>(profile.play[static_cast<std::size_t>(t)])];
    int part = -1;
    if (nearly_equal(a, TruncVector(a.dim()))) {
      part = 0;
    } else {
      const auto& ms = game.mixed_at(t);
      for (int i = 0; i < k && part < 0; ++i) {
        if (nearly_equal(a, ms[static_cast<std::size_t>(i)])) part = i + 1;
      }
    }
    if (part < 0) {
      r.not_applicable = true;
      return r;
    }
    parts[static_cast<std::size_t>(part)].push_back(t);
  }

  const Rational t1_mass = model.t1_mass();
  const Rational expected = t1_mass / Rational(k + 1);
  r.masses_pass = true;
  for (const auto& p : parts) {
    r.partition_masses.push_back(space.mass_of(p));
    if (r.partition_masses.back() != expected) r.masses_pass = false;
  }

  r.independence_pass = true;
  const std::uint64_t n_max = std::uint64_t{1} << model.level;
  for (std::uint64_t n = 1; n < n_max; ++n) {
    const AtomSet d = model.atoms_in_cells(walsh_set(n, model.level));
    const Rational d_mass = space.mass_of(d);
    for (std::size_t i = 0; i < parts.size(); ++i) {
      IndependenceRow row;
      row.part = static_cast<int>(i);
      row.walsh_index = n;
      row.lhs = space.mass_of(set_intersection(parts[i], d)) * t1_mass;
      row.rhs = r.partition_masses[i] * d_mass;
      row.pass = row.lhs == row.rhs;
      if (!row.pass) r.independence_pass = false;
      r.independence_table.push_back(std::move(row));
    }
  }
  return r;
}

// ---------------------------------------------------------------------------

QSystem q_system_from_labels(int k, const Rational& gamma, const Rational& d0, const std::vector<int>& labels) {
  if (k < 1) throw PreconditionError("k must be at least 1");
  if (!(d0 > Rational(0))) throw PreconditionError("mesh width must be positive");
  if (gamma < Rational(0) || !(gamma < Rational(1))) throw PreconditionError("gamma must lie in [0, 1)");
  const Rational span = (Rational(1) - gamma) / d0;
  std::int64_t mesh = floor(span);
  if (Rational(mesh) < span) ++mesh;
  if (labels.size() != static_cast<std::size_t>(mesh)) {
    throw StructuralError("expected " + std::to_string(mesh) + " mesh labels");
  }
  QSystem q;
  q.k = k;
  q.gamma = gamma;
  q.d0 = d0;
  q.cells.assign(static_cast<std::size_t>(k), std::vector<bool>(static_cast<std::size_t>(mesh), false));
  for (std::size_t c = 0; c < labels.size(); ++c) {
    const int label = labels[c];
    if (label < 0 || label > k) throw PreconditionError("mesh label out of range");
    if (label > 0) q.cells[static_cast<std::size_t>(label - 1)][c] = true;
  }
  return q;
}

std::size_t q_mesh_count(const Rational& gamma, const Rational& d0) {
  if (!(d0 > Rational(0))) throw PreconditionError("mesh width must be positive");
  const Rational span = (Rational(1) - gamma) / d0;
  std::int64_t mesh = floor(span);
  if (Rational(mesh) < span) ++mesh;
  return static_cast<std::size_t>(mesh);
}

QSystem canonical_q_system(int k, const Rational& gamma, const Rational& d0, int phase) {
  if (k < 1) throw PreconditionError("k must be at least 1");
  std::vector<int> labels(q_mesh_count(gamma, d0));
  for (std::size_t c = 0; c < labels.size(); ++c) {
    labels[c] = static_cast<int>(((static_cast<std::int64_t>(c) + phase) % (k + 1) + (k + 1)) % (k + 1));
  }
  return q_system_from_labels(k, gamma, d0, labels);
}

LemmaBound lemma_bound_check(const QSystem& q, int L) {
  if (q.k < 1 || q.cells.size() != static_cast<std::size_t>(q.k)) throw StructuralError("q system needs k rows");
  if (L < 0 || L > 20) throw DimensionError("level out of range");
  const std::size_t mesh = q.mesh_count();
  for (const auto& row : q.cells) {
    if (row.size() != mesh) throw StructuralError("q rows have different lengths");
  }
  std::vector<int> cover(mesh, 0);
  for (std::size_t c = 0; c < mesh; ++c) {
    for (const auto& row : q.cells) cover[c] += row[c] ? 1 : 0;
    if (cover[c] > 1) throw PreconditionError("q supports overlap on mesh interval " + std::to_string(c));
  }

  const Rational one(1);
  const Rational t1 = one - q.gamma;
  const std::size_t cells = std::size_t{1} << L;
  const Rational width = t1 / Rational(static_cast<std::int64_t>(cells));

  // Overlap of every mesh interval with the dyadic cells it meets.
  struct Piece {
    std::size_t mesh, cell;
    Rational length;
  };
  std::vector<Piece> pieces;
  for (std::size_t c = 0; c < mesh; ++c) {
    const Rational lo = Rational(static_cast<std::int64_t>(c)) * q.d0;
    Rational hi = lo + q.d0;
    if (hi > t1) hi = t1;
    if (!(lo < hi)) continue;
    auto s = static_cast<std::size_t>(floor(lo / width));
    for (; s < cells; ++s) {
      const Rational cell_lo = width * Rational(static_cast<std::int64_t>(s));
      const Rational cell_hi = cell_lo + width;
      if (!(cell_lo < hi)) break;
      const Rational a = lo > cell_lo ? lo : cell_lo;
      const Rational b = hi < cell_hi ? hi : cell_hi;
      if (a < b) pieces.push_back(Piece{c, s, b - a});
    }
  }
  std::int64_t den = 1;
  for (const auto& p : pieces) {
    den = std::lcm(den, p.length.den());
    if (den > (std::int64_t{1} << 50)) throw std::overflow_error("common denominator too large for the mesh");
  }

  LemmaBound out;
  out.bound = 4.0 * q.d0.to_double();
  for (int i = 0; i < q.k; ++i) {
    std::vector<std::int64_t> integral(cells, 0);  // in units of 1/den
    for (const auto& p : pieces) {
      const int value = (q.cells[static_cast<std::size_t>(i)][p.mesh] ? 1 : 0) + cover[p.mesh] - 1;
      if (value == 0) continue;
      integral[p.cell] += value * (p.length.num() * (den / p.length.den()));
    }
    paley_transform_inplace(integral);
    long double sum = 0.0L;
    long double scale = 1.0L / static_cast<long double>(den);
    for (std::size_t n = 0; n < cells; ++n) {
      sum += scale * static_cast<long double>(integral[n] < 0 ? -integral[n] : integral[n]);
      scale /= 2.0L;
    }
    out.sum = std::max(out.sum, static_cast<double>(sum));
  }
  out.pass = out.sum < out.bound;
  return out;
}

}  // namespace corrint
