#include "corrint/set_integration.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <string>

#include "corrint/errors.hpp"
#include "corrint/parallel.hpp"
#include "kd_tree.hpp"
#include "point_index.hpp"

namespace corrint {

namespace {

PointCloudSet cloud_from_index(const detail::PointIndex& index) {
  std::vector<TruncVector> pts;
  pts.reserve(index.size());
  for (std::size_t i : index.canonical_order()) {
    auto p = index.point(i);
    pts.emplace_back(std::vector<double>(p.begin(), p.end()));
  }
  return PointCloudSet(index.dim(), std::move(pts));
}

void require_same_space(const SigmaPartition& alg, const DiscreteSpace& space) {
  if (alg.atom_count() != space.size()) throw StructuralError("partition/space mismatch");
}

std::string to_dec(std::uint64_t v) { return std::to_string(v); }

/// Saturating product of set sizes.
std::uint64_t product_size(const std::vector<std::size_t>& sizes) {
  std::uint64_t total = 1;
  for (std::size_t s : sizes) {
    if (s != 0 && total > std::numeric_limits<std::uint64_t>::max() / s) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    total *= s;
  }
  return total;
}

std::string exact_product(const std::vector<std::size_t>& sizes) {
  std::vector<std::uint32_t> limbs{1};
  constexpr std::uint64_t kBase = 1000000000ULL;
  for (std::size_t f : sizes) {
    std::uint64_t carry = 0;
    for (auto& limb : limbs) {
      const std::uint64_t cur = static_cast<std::uint64_t>(limb) * f + carry;
      limb = static_cast<std::uint32_t>(cur % kBase);
      carry = cur / kBase;
    }
    while (carry) {
      limbs.push_back(static_cast<std::uint32_t>(carry % kBase));
      carry /= kBase;
    }
  }
  std::string out = std::to_string(limbs.back());
  for (std::size_t i = limbs.size() - 1; i-- > 0;) {
    std::string part = std::to_string(limbs[i]);
    out += std::string(9 - part.size(), '0') + part;
  }
  return out;
}

void check_enumeration_cap(const std::vector<std::size_t>& sizes, std::uint64_t cap) {
  const std::uint64_t total = product_size(sizes);
  if (total > cap) {
    const std::string exact = exact_product(sizes);
    throw CapacityError("enumeration needs " + exact + " selections, cap is " + to_dec(cap) +
                            "; Minkowski mode avoids full enumeration",
                        exact);
  }
}

/// {Σ_b weights[b] * v_b : v_b in choices[b]} by brute-force enumeration.
detail::PointIndex enumerate_sums(const std::vector<std::vector<TruncVector>>& choices,
                                  const std::vector<double>& weights, std::size_t dim) {
  std::vector<std::size_t> sizes;
  for (const auto& c : choices) sizes.push_back(c.size());
  const std::uint64_t total = product_size(sizes);
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::uint64_t>(thread_count(), total));
  const std::uint64_t chunk = (total + workers - 1) / workers;
  std::vector<detail::PointIndex> partial(workers, detail::PointIndex(dim, kDedupTol));
  parallel_for(workers, [&](std::size_t wb, std::size_t we) {
    std::vector<double> point(dim);
    std::vector<std::size_t> digits(choices.size());
    for (std::size_t w = wb; w < we; ++w) {
      const std::uint64_t begin = std::min<std::uint64_t>(total, w * chunk);
      const std::uint64_t end = std::min<std::uint64_t>(total, begin + chunk);
      for (std::uint64_t idx = begin; idx < end; ++idx) {
        std::uint64_t rest = idx;
        for (std::size_t b = choices.size(); b-- > 0;) {
          digits[b] = rest % sizes[b];
          rest /= sizes[b];
        }
        std::fill(point.begin(), point.end(), 0.0);
        for (std::size_t b = 0; b < choices.size(); ++b) {
          const TruncVector& v = choices[b][digits[b]];
          for (std::size_t m = 0; m < dim; ++m) point[m] += weights[b] * v[m];
        }
        partial[w].insert(point);
      }
    }
  });
  detail::PointIndex merged(dim, kDedupTol);
  for (const auto& part : partial) {
    for (std::size_t i = 0; i < part.size(); ++i) merged.insert(part.point(i));
  }
  return merged;
}

std::uint64_t binomial_saturating(std::uint64_t n, std::uint64_t r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= r; ++i) {
    acc = acc * (n - r + i) / i;
    if (acc > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(acc);
}

bool same_value_list(const std::vector<TruncVector>& a, const std::vector<TruncVector>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!nearly_equal(a[i], b[i])) return false;
  }
  return true;
}

/// Same set as enumerate_sums, by Minkowski accumulation. Blocks sharing a
/// weight and a value list are summed at once via their count vectors.
detail::PointIndex minkowski_sums(const std::vector<std::vector<TruncVector>>& choices,
                                  const std::vector<double>& weights, std::size_t dim,
                                  std::uint64_t cap) {
  struct Group {
    std::size_t rep;
    std::uint64_t count;
  };
  std::vector<Group> groups;
  for (std::size_t b = 0; b < choices.size(); ++b) {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) {
      return weights[g.rep] == weights[b] && same_value_list(choices[g.rep], choices[b]);
    });
    if (it == groups.end()) {
      groups.push_back(Group{b, 1});
    } else {
      ++it->count;
    }
  }

  auto over_cap = [&](std::uint64_t size) {
    throw CapacityError("Minkowski accumulation needs " + to_dec(size) + " points, cap is " + to_dec(cap),
                        to_dec(size));
  };

  detail::PointIndex acc(dim, kDedupTol);
  acc.insert(std::vector<double>(dim, 0.0));
  for (const Group& g : groups) {
    const auto& values = choices[g.rep];
    const std::size_t r = values.size();
    const std::uint64_t compositions = binomial_saturating(g.count + r - 1, r - 1);
    if (compositions > cap) over_cap(compositions);

    detail::PointIndex group_set(dim, kDedupTol);
    std::vector<std::uint64_t> counts(r, 0);
    std::vector<double> point(dim);
    // Lexicographic walk over count vectors summing to g.count.
    counts[0] = g.count;
    while (true) {
      std::fill(point.begin(), point.end(), 0.0);
      for (std::size_t v = 0; v < r; ++v) {
        if (counts[v] == 0) continue;
        const double w = static_cast<double>(counts[v]) * weights[g.rep];
        for (std::size_t m = 0; m < dim; ++m) point[m] += w * values[v][m];
      }
      group_set.insert(point);
      if (r == 1) break;
      // Next composition: move one unit from the last non-zero slot before
      // the tail into its right neighbour, gathering the tail there.
      std::uint64_t tail = counts[r - 1];
      counts[r - 1] = 0;
      std::size_t j = r - 1;
      while (j-- > 0 && counts[j] == 0) {
      }
      if (j == static_cast<std::size_t>(-1)) break;
      --counts[j];
      counts[j + 1] = tail + 1;
    }

    detail::PointIndex next(dim, kDedupTol);
    for (std::size_t a = 0; a < acc.size(); ++a) {
      auto p = acc.point(a);
      for (std::size_t q = 0; q < group_set.size(); ++q) {
        auto gq = group_set.point(q);
        for (std::size_t m = 0; m < dim; ++m) point[m] = p[m] + gq[m];
        next.insert(point);
        if (next.size() > cap) over_cap(next.size());
      }
    }
    acc = std::move(next);
  }
  return acc;
}

detail::PointIndex block_sums(const std::vector<std::vector<TruncVector>>& choices,
                              const std::vector<double>& weights, std::size_t dim,
                              const SetOptions& options) {
  for (std::size_t b = 0; b < choices.size(); ++b) {
    if (choices[b].empty()) {
      throw NoSelectionError("block " + std::to_string(b) + " has no value common to all of its atoms");
    }
  }
  if (options.mode == SetMode::Enumerate) return enumerate_sums(choices, weights, dim);
  return minkowski_sums(choices, weights, dim, options.cap);
}

}  // namespace

// ---------------------------------------------------------------------------

PointCloudSet::PointCloudSet(std::size_t dim, std::vector<TruncVector> points) : dim_(dim) {
  detail::PointIndex index(dim, kDedupTol);
  for (const auto& p : points) {
    if (p.dim() != dim) throw DimensionError("point dimension differs from the cloud dimension");
    index.insert(p.coeffs());
  }
  points_.reserve(index.size());
  for (std::size_t i : index.canonical_order()) {
    auto p = index.point(i);
    points_.emplace_back(std::vector<double>(p.begin(), p.end()));
  }
  std::vector<double> flat;
  flat.reserve(points_.size() * dim_);
  for (const auto& p : points_) flat.insert(flat.end(), p.coeffs().begin(), p.coeffs().end());
  tree_ = std::make_shared<const detail::KdTree>(dim_, std::move(flat));
}

PointCloudSet PointCloudSet::from_flat(std::size_t dim, const std::vector<double>& flat) {
  if (dim == 0 || flat.size() % dim != 0) throw DimensionError("flat point data is not a multiple of dim");
  std::vector<TruncVector> pts;
  pts.reserve(flat.size() / dim);
  for (std::size_t i = 0; i < flat.size(); i += dim) {
    pts.emplace_back(std::vector<double>(flat.begin() + static_cast<std::ptrdiff_t>(i),
                                         flat.begin() + static_cast<std::ptrdiff_t>(i + dim)));
  }
  return PointCloudSet(dim, std::move(pts));
}

double PointCloudSet::distance_to(const TruncVector& v, const Metric& metric, std::size_t* index) const {
  if (points_.empty()) throw PreconditionError("distance to an empty cloud");
  if (v.dim() != dim_) throw DimensionError("query dimension differs from the cloud dimension");
  const auto hit = tree_->nearest(v.coeffs(), metric);
  if (index) *index = hit.index;
  return hit.distance;
}

bool PointCloudSet::contains(const TruncVector& v, const Metric& metric, double tol) const {
  return distance_to(v, metric) <= tol;
}

// ---------------------------------------------------------------------------

TruncVector integrate_selection(const Selection& f) {
  TruncVector out(f.dim());
  for (int t = 0; t < f.space().size(); ++t) {
    const double w = f.space().mass(t).to_double();
    const TruncVector& v = f.at(t);
    for (std::size_t m = 0; m < out.dim(); ++m) out[m] += w * v[m];
  }
  return out;
}

namespace {

BlockFunction block_average(const DiscreteSpace& space, const SigmaPartition& g_alg,
                            const std::function<const TruncVector&(int)>& value_at, std::size_t dim) {
  BlockFunction out{g_alg, {}};
  out.values.reserve(g_alg.block_count());
  for (const auto& block : g_alg.blocks()) {
    const Rational total = space.mass_of(block);
    if (total.is_zero()) throw DegenerateBlockError("conditioning on a block of zero mass");
    TruncVector avg(dim);
    for (int t : block) {
      const double w = (space.mass(t) / total).to_double();
      const TruncVector& v = value_at(t);
      for (std::size_t m = 0; m < dim; ++m) avg[m] += w * v[m];
    }
    out.values.push_back(std::move(avg));
  }
  return out;
}

}  // namespace

BlockFunction conditional_expectation(const Selection& f, const SigmaPartition& g_alg) {
  require_same_space(g_alg, f.space());
  if (!is_refinement(f.alg(), g_alg) && !is_refinement(SigmaPartition::singletons(f.space().size()), g_alg)) {
    throw PreconditionError("conditioning algebra is not coarser than the selection's algebra");
  }
  return block_average(f.space(), g_alg, [&](int t) -> const TruncVector& { return f.at(t); }, f.dim());
}

BlockFunction conditional_expectation(const BlockFunction& f, const DiscreteSpace& space,
                                      const SigmaPartition& g_alg) {
  require_same_space(g_alg, space);
  require_same_space(f.alg, space);
  if (!is_refinement(f.alg, g_alg)) {
    throw PreconditionError("conditioning algebra is not coarser than the function's algebra");
  }
  const std::size_t dim = f.values.empty() ? 0 : f.values.front().dim();
  return block_average(space, g_alg, [&](int t) -> const TruncVector& { return f.at_atom(t); }, dim);
}

Selection lift(const BlockFunction& f, std::shared_ptr<const DiscreteSpace> space) {
  std::vector<TruncVector> choice;
  choice.reserve(static_cast<std::size_t>(space->size()));
  for (int t = 0; t < space->size(); ++t) choice.push_back(f.at_atom(t));
  return Selection(std::move(space), f.alg, std::move(choice));
}

// ---------------------------------------------------------------------------

PointCloudSet aumann_integral_set(const Correspondence& corr, const SigmaPartition& alg,
                                  const SetOptions& options) {
  require_same_space(alg, corr.space());
  const auto choices = per_block_choices(corr, alg);
  if (options.mode == SetMode::Enumerate) {
    std::vector<std::size_t> sizes;
    for (const auto& c : choices) sizes.push_back(c.size());
    check_enumeration_cap(sizes, options.cap);
  }
  std::vector<double> weights;
  for (const auto& block : alg.blocks()) weights.push_back(corr.space().mass_of(block).to_double());
  return cloud_from_index(block_sums(choices, weights, corr.dim(), options));
}

ConditionalSet::ConditionalSet(SigmaPartition g_alg, std::vector<Rational> block_masses,
                               std::vector<PointCloudSet> per_block)
    : g_alg_(std::move(g_alg)), block_masses_(std::move(block_masses)), per_block_(std::move(per_block)) {
  if (block_masses_.size() != g_alg_.block_count() || per_block_.size() != g_alg_.block_count()) {
    throw StructuralError("conditional set needs one mass and one point set per block");
  }
}

std::uint64_t ConditionalSet::size() const {
  std::vector<std::size_t> sizes;
  for (const auto& s : per_block_) sizes.push_back(s.size());
  return product_size(sizes);
}

BlockFunction ConditionalSet::member(std::uint64_t index) const {
  BlockFunction out{g_alg_, std::vector<TruncVector>(per_block_.size())};
  for (std::size_t b = per_block_.size(); b-- > 0;) {
    const std::size_t n = per_block_[b].size();
    out.values[b] = per_block_[b][index % n];
    index /= n;
  }
  return out;
}

double ConditionalSet::function_distance(const BlockFunction& a, const BlockFunction& b,
                                         const Metric& metric) const {
  double total = 0.0;
  for (std::size_t i = 0; i < per_block_.size(); ++i) {
    total += block_masses_[i].to_double() * metric.distance(a.values.at(i), b.values.at(i));
  }
  return total;
}

double ConditionalSet::distance_to(const BlockFunction& f, const Metric& metric) const {
  if (!(f.alg == g_alg_)) throw StructuralError("function and conditional set use different algebras");
  double total = 0.0;
  for (std::size_t i = 0; i < per_block_.size(); ++i) {
    total += block_masses_[i].to_double() * per_block_[i].distance_to(f.values.at(i), metric);
  }
  return total;
}

bool ConditionalSet::contains(const BlockFunction& f, const Metric& metric, double tol) const {
  return distance_to(f, metric) <= tol;
}

ConditionalSet conditional_set(const Correspondence& corr, const SigmaPartition& t_alg,
                               const SigmaPartition& g_alg, const SetOptions& options) {
  const DiscreteSpace& space = corr.space();
  require_same_space(t_alg, space);
  require_same_space(g_alg, space);
  if (!is_refinement(t_alg, g_alg)) throw PreconditionError("t_alg does not refine g_alg");

  const auto choices = per_block_choices(corr, t_alg);

  std::vector<Rational> masses;
  std::vector<PointCloudSet> per_block;
  for (const auto& g_block : g_alg.blocks()) {
    const Rational g_mass = space.mass_of(g_block);
    if (g_mass.is_zero()) throw DegenerateBlockError("conditioning on a block of zero mass");
    std::vector<std::vector<TruncVector>> sub_choices;
    std::vector<double> weights;
    for (std::size_t b = 0; b < t_alg.block_count(); ++b) {
      const AtomSet& t_block = t_alg.block(b);
      if (g_alg.block_of(t_block.front()) != g_alg.block_of(g_block.front())) continue;
      sub_choices.push_back(choices[b]);
      weights.push_back((space.mass_of(t_block) / g_mass).to_double());
    }
    if (options.mode == SetMode::Enumerate) {
      std::vector<std::size_t> sizes;
      for (const auto& c : sub_choices) sizes.push_back(c.size());
      check_enumeration_cap(sizes, options.cap);
    }
    masses.push_back(g_mass);
    per_block.push_back(cloud_from_index(block_sums(sub_choices, weights, corr.dim(), options)));
  }
  return ConditionalSet(g_alg, std::move(masses), std::move(per_block));
}

// ---------------------------------------------------------------------------

std::vector<AtomSet> lyapunov_partition(const DiscreteSpace& space, const SigmaPartition& f_alg,
                                        const SigmaPartition& t_alg, const std::vector<Rational>& weights) {
  require_same_space(f_alg, space);
  require_same_space(t_alg, space);
  if (!is_refinement(t_alg, f_alg)) throw PreconditionError("t_alg does not refine f_alg");
  if (weights.empty()) throw PreconditionError("no weights");
  Rational sum(0);
  for (const auto& w : weights) {
    if (w < Rational(0)) throw PreconditionError("negative mixing weight");
    sum = sum + w;
  }
  if (sum != Rational(1)) throw PreconditionError("mixing weights do not sum to 1");

  std::vector<AtomSet> parts(weights.size());
  for (std::size_t fb = 0; fb < f_alg.block_count(); ++fb) {
    const AtomSet& block = f_alg.block(fb);
    const Rational block_mass = space.mass_of(block);
    std::vector<Rational> bounds;  // cumulative targets
    Rational cum(0);
    for (const auto& w : weights) {
      cum = cum + w * block_mass;
      bounds.push_back(cum);
    }
    Rational filled(0);
    std::size_t part = 0;
    for (std::size_t tb = 0; tb < t_alg.block_count(); ++tb) {
      const AtomSet& sub = t_alg.block(tb);
      if (f_alg.block_of(sub.front()) != static_cast<int>(fb)) continue;
      while (part < bounds.size() && bounds[part] <= filled) ++part;
      const Rational after = filled + space.mass_of(sub);
      if (part >= bounds.size() || after > bounds[part]) {
        throw DivisibilityError("block " + std::to_string(fb) +
                                    " cannot be split into parts of the requested weights",
                                static_cast<int>(fb));
      }
      parts[part].insert(parts[part].end(), sub.begin(), sub.end());
      filled = after;
    }
  }
  for (auto& p : parts) p = make_atom_set(std::move(p));
  return parts;
}

Selection lyapunov_mix(const std::vector<Selection>& selections, const std::vector<Rational>& weights,
                       const SigmaPartition& f_alg, const SigmaPartition& t_alg) {
  if (selections.empty() || selections.size() != weights.size()) {
    throw PreconditionError("need one weight per selection");
  }
  const auto& space_ptr = selections.front().space_ptr();
  for (const auto& s : selections) {
    if (!(s.space() == *space_ptr)) throw StructuralError("selections live on different spaces");
    for (const auto& block : f_alg.blocks()) {
      for (int t : block) {
        if (!nearly_equal(s.at(t), s.at(block.front()))) {
          throw PreconditionError("selection is not measurable with respect to f_alg");
        }
      }
    }
  }
  const auto parts = lyapunov_partition(*space_ptr, f_alg, t_alg, weights);
  std::vector<TruncVector> choice(static_cast<std::size_t>(space_ptr->size()));
  for (std::size_t j = 0; j < parts.size(); ++j) {
    for (int t : parts[j]) choice[static_cast<std::size_t>(t)] = selections[j].at(t);
  }
  const auto& source = selections.front().source();
  const bool shared_source = std::all_of(selections.begin(), selections.end(),
                                         [&](const Selection& s) { return s.source() == source; });
  if (source && shared_source) return Selection(source, t_alg, std::move(choice));
  return Selection(space_ptr, t_alg, std::move(choice));
}

// ---------------------------------------------------------------------------

double convexity_gap(const PointCloudSet& cloud, int samples, const Metric& metric, std::uint64_t seed) {
  if (cloud.empty()) throw PreconditionError("convexity gap of an empty cloud");
  if (cloud.size() == 1) return 0.0;
  const std::size_t n = cloud.size();
  const std::size_t dim = cloud.dim();
  std::vector<TruncVector> queries;

  std::vector<std::size_t> extremes;
  for (std::size_t m = 0; m < dim; ++m) {
    std::size_t lo = 0;
    std::size_t hi = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (cloud[i][m] < cloud[lo][m]) lo = i;
      if (cloud[i][m] > cloud[hi][m]) hi = i;
    }
    extremes.push_back(lo);
    extremes.push_back(hi);
  }
  std::sort(extremes.begin(), extremes.end());
  extremes.erase(std::unique(extremes.begin(), extremes.end()), extremes.end());
  for (std::size_t a = 0; a < extremes.size(); ++a) {
    for (std::size_t b = a + 1; b < extremes.size(); ++b) {
      queries.push_back(0.5 * cloud[extremes[a]] + 0.5 * cloud[extremes[b]]);
    }
  }

  constexpr double kGolden = 0.6180339887498949;
  constexpr double kPlastic1 = 0.7548776662466927;
  constexpr double kPlastic2 = 0.5698402909980532;
  std::mt19937_64 rng(seed);
  for (int s = 0; s < samples; ++s) {
    const double ds = static_cast<double>(s);
    const std::size_t a = rng() % n;
    const std::size_t b = rng() % n;
    if (s % 2 == 0) {
      const double u = std::fmod(0.5 + ds * kGolden, 1.0);
      queries.push_back(u * cloud[a] + (1.0 - u) * cloud[b]);
    } else {
      const std::size_t c = rng() % n;
      double u1 = std::fmod(0.5 + ds * kPlastic1, 1.0);
      double u2 = std::fmod(0.5 + ds * kPlastic2, 1.0);
      if (u1 + u2 > 1.0) {
        u1 = 1.0 - u1;
        u2 = 1.0 - u2;
      }
      queries.push_back(u1 * cloud[a] + u2 * cloud[b] + (1.0 - u1 - u2) * cloud[c]);
    }
  }

  std::vector<double> dist(queries.size());
  parallel_for(queries.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) dist[i] = cloud.distance_to(queries[i], metric);
  });
  return *std::max_element(dist.begin(), dist.end());
}

double hausdorff_semidistance(const PointCloudSet& a, const PointCloudSet& b, const Metric& metric) {
  if (a.empty() || b.empty()) throw PreconditionError("semidistance of an empty cloud");
  std::vector<double> dist(a.size());
  parallel_for(a.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) dist[i] = b.distance_to(a[i], metric);
  });
  return *std::max_element(dist.begin(), dist.end());
}

double hausdorff_semidistance(const ConditionalSet& a, const ConditionalSet& b, const Metric& metric) {
  if (!(a.g_alg() == b.g_alg())) throw StructuralError("conditional sets use different algebras");
  // The block-weighted distance decomposes, so the semidistance does too.
  double total = 0.0;
  for (std::size_t i = 0; i < a.block_count(); ++i) {
    total += a.block_masses()[i].to_double() * hausdorff_semidistance(a.block_set(i), b.block_set(i), metric);
  }
  return total;
}

std::vector<double> uhc_diagnostic(const std::vector<std::shared_ptr<const Correspondence>>& family,
                                   const Correspondence& limit, const SigmaPartition& t_alg,
                                   const SigmaPartition& g_alg, const Metric& metric,
                                   const SetOptions& options) {
  for (const auto& member : family) {
    if (!(member->space() == limit.space())) throw StructuralError("family member lives on another space");
  }
  std::vector<double> out;
  out.reserve(family.size());
  if (g_alg.is_trivial()) {
    const PointCloudSet target = aumann_integral_set(limit, t_alg, options);
    for (const auto& member : family) {
      out.push_back(hausdorff_semidistance(aumann_integral_set(*member, t_alg, options), target, metric));
    }
  } else {
    const ConditionalSet target = conditional_set(limit, t_alg, g_alg, options);
    for (const auto& member : family) {
      out.push_back(hausdorff_semidistance(conditional_set(*member, t_alg, g_alg, options), target, metric));
    }
  }
  return out;
}

}  // namespace corrint
