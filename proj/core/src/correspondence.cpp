#include "corrint/correspondence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "corrint/errors.hpp"
#include "corrint/walsh.hpp"

namespace corrint {

namespace {

// Decimal product of small factors, for capacity messages.
std::string decimal_product(const std::vector<std::size_t>& factors) {
  std::vector<std::uint32_t> limbs{1};  // base 1e9, little endian
  constexpr std::uint64_t kBase = 1000000000ULL;
  for (std::size_t f : factors) {
    std::uint64_t carry = 0;
    for (auto& limb : limbs) {
      std::uint64_t cur = static_cast<std::uint64_t>(limb) * f + carry;
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

}  // namespace

bool nearly_equal(const TruncVector& a, const TruncVector& b, double tol) {
  if (a.dim() != b.dim()) return false;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    if (std::fabs(a[i] - b[i]) > tol) return false;
  }
  return true;
}

Correspondence::Correspondence(std::shared_ptr<const DiscreteSpace> space,
                               std::vector<std::vector<TruncVector>> values)
    : space_(std::move(space)) {
  if (!space_) throw StructuralError("correspondence without a space");
  if (values.size() != static_cast<std::size_t>(space_->size())) {
    throw StructuralError("correspondence has " + std::to_string(values.size()) +
                          " value sets for " + std::to_string(space_->size()) + " atoms");
  }
  values_.reserve(values.size());
  for (std::size_t t = 0; t < values.size(); ++t) {
    if (values[t].empty()) throw StructuralError("empty value set at atom " + std::to_string(t));
    std::vector<TruncVector> kept;
    for (auto& v : values[t]) {
      if (dim_ == 0) dim_ = v.dim();
      if (v.dim() != dim_ || dim_ == 0) throw DimensionError("value dimensions differ");
      for (double c : v.coeffs()) {
        if (!std::isfinite(c)) throw StructuralError("unbounded value at atom " + std::to_string(t));
      }
      bool seen = std::any_of(kept.begin(), kept.end(),
                              [&](const TruncVector& w) { return nearly_equal(v, w); });
      if (!seen) kept.push_back(std::move(v));
    }
    values_.push_back(std::move(kept));
  }
}

const std::vector<TruncVector>& Correspondence::values(int atom) const {
  if (atom < 0 || atom >= space_->size()) {
    throw StructuralError("atom " + std::to_string(atom) + " outside correspondence domain");
  }
  return values_[static_cast<std::size_t>(atom)];
}

double Correspondence::bound(NormFlavor flavor) const {
  double b = 0.0;
  for (const auto& set : values_) {
    for (const auto& v : set) b = std::max(b, norm(v, flavor));
  }
  return b;
}

bool Correspondence::contains(int atom, const TruncVector& v, double tol) const {
  const auto& set = values(atom);
  return std::any_of(set.begin(), set.end(), [&](const TruncVector& w) { return nearly_equal(v, w, tol); });
}

Selection::Selection(std::shared_ptr<const Correspondence> source, SigmaPartition alg,
                     std::vector<TruncVector> choice)
    : space_(source ? source->space_ptr() : nullptr),
      source_(std::move(source)),
      alg_(std::move(alg)),
      choice_(std::move(choice)) {
  if (!source_) throw StructuralError("selection without a correspondence");
  validate();
}

Selection::Selection(std::shared_ptr<const DiscreteSpace> space, SigmaPartition alg,
                     std::vector<TruncVector> choice)
    : space_(std::move(space)), alg_(std::move(alg)), choice_(std::move(choice)) {
  if (!space_) throw StructuralError("selection without a space");
  validate();
}

void Selection::validate() const {
  if (choice_.size() != static_cast<std::size_t>(space_->size()) ||
      alg_.atom_count() != space_->size()) {
    throw StructuralError("selection does not cover the space");
  }
  for (const auto& v : choice_) {
    if (v.dim() != choice_.front().dim()) throw DimensionError("selection dimensions differ");
  }
  for (const auto& block : alg_.blocks()) {
    const TruncVector& first = choice_[static_cast<std::size_t>(block.front())];
    for (int a : block) {
      if (!nearly_equal(choice_[static_cast<std::size_t>(a)], first)) {
        throw PreconditionError("selection is not constant on the block containing atom " +
                                std::to_string(a));
      }
    }
  }
  if (source_) {
    for (int t = 0; t < space_->size(); ++t) {
      if (!source_->contains(t, choice_[static_cast<std::size_t>(t)])) {
        throw PreconditionError("selection leaves the correspondence at atom " + std::to_string(t));
      }
    }
  }
}

bool check_measurable(const Correspondence& corr, const SigmaPartition& alg) {
  if (alg.atom_count() != corr.space().size()) throw StructuralError("partition/space mismatch");
  auto same_set = [](const std::vector<TruncVector>& a, const std::vector<TruncVector>& b) {
    if (a.size() != b.size()) return false;
    return std::all_of(a.begin(), a.end(), [&](const TruncVector& v) {
      return std::any_of(b.begin(), b.end(), [&](const TruncVector& w) { return nearly_equal(v, w); });
    });
  };
  for (const auto& block : alg.blocks()) {
    for (int a : block) {
      if (!same_set(corr.values(a), corr.values(block.front()))) return false;
    }
  }
  return true;
}

std::vector<std::vector<TruncVector>> per_block_choices(const Correspondence& corr,
                                                        const SigmaPartition& alg) {
  if (alg.atom_count() != corr.space().size()) throw StructuralError("partition/space mismatch");
  std::vector<std::vector<TruncVector>> out;
  out.reserve(alg.block_count());
  for (const auto& block : alg.blocks()) {
    std::vector<TruncVector> common;
    for (const auto& v : corr.values(block.front())) {
      bool everywhere = std::all_of(block.begin(), block.end(), [&](int a) { return corr.contains(a, v); });
      if (everywhere) common.push_back(v);
    }
    out.push_back(std::move(common));
  }
  return out;
}

std::string selection_count(const Correspondence& corr, const SigmaPartition& alg) {
  std::vector<std::size_t> sizes;
  for (const auto& c : per_block_choices(corr, alg)) sizes.push_back(c.size());
  return decimal_product(sizes);
}

SelectionStream::SelectionStream(std::shared_ptr<const Correspondence> corr, SigmaPartition alg,
                                 std::uint64_t cap)
    : corr_(std::move(corr)), alg_(std::move(alg)) {
  if (!corr_) throw StructuralError("enumeration without a correspondence");
  choices_ = per_block_choices(*corr_, alg_);
  std::vector<std::size_t> sizes;
  __int128 count = 1;
  bool overflow = false;
  for (std::size_t b = 0; b < choices_.size(); ++b) {
    if (choices_[b].empty()) {
      throw NoSelectionError("block " + std::to_string(b) +
                             " has no value common to all of its atoms");
    }
    sizes.push_back(choices_[b].size());
    count *= static_cast<__int128>(choices_[b].size());
    if (count > static_cast<__int128>(std::numeric_limits<std::uint64_t>::max())) {
      overflow = true;
      count = static_cast<__int128>(std::numeric_limits<std::uint64_t>::max());
    }
  }
  if (overflow || count > static_cast<__int128>(cap)) {
    const std::string exact = decimal_product(sizes);
    throw CapacityError("enumeration needs " + exact + " selections, cap is " + std::to_string(cap),
                        exact);
  }
  count_ = static_cast<std::uint64_t>(count);
  digits_.assign(choices_.size(), 0);
}

std::optional<Selection> SelectionStream::next() {
  if (emitted_ == count_) return std::nullopt;
  if (emitted_ > 0) {
    for (std::size_t b = digits_.size(); b-- > 0;) {
      if (++digits_[b] < static_cast<int>(choices_[b].size())) break;
      digits_[b] = 0;
    }
  }
  ++emitted_;
  std::vector<TruncVector> choice(static_cast<std::size_t>(corr_->space().size()));
  for (std::size_t b = 0; b < alg_.block_count(); ++b) {
    const TruncVector& v = choices_[b][static_cast<std::size_t>(digits_[b])];
    for (int a : alg_.block(b)) choice[static_cast<std::size_t>(a)] = v;
  }
  return Selection(corr_, alg_, std::move(choice));
}

SelectionStream enumerate_selections(std::shared_ptr<const Correspondence> corr,
                                     const SigmaPartition& alg, std::uint64_t cap) {
  return SelectionStream(std::move(corr), alg, cap);
}

// ---------------------------------------------------------------------------

double DyadicModel::phi(int atom) const {
  const int cell = cell_of_atom.at(static_cast<std::size_t>(atom));
  if (cell < 0) return gamma.to_double() / 2.0;
  const Rational mid = gamma + t1_mass() * Rational(2 * cell + 1, std::int64_t{2} << level);
  return mid.to_double();
}

AtomSet DyadicModel::t1_atoms() const {
  AtomSet out;
  for (std::size_t a = 0; a < cell_of_atom.size(); ++a) {
    if (cell_of_atom[a] >= 0) out.push_back(static_cast<int>(a));
  }
  return out;
}

AtomSet DyadicModel::t2_atoms() const {
  AtomSet out;
  for (std::size_t a = 0; a < cell_of_atom.size(); ++a) {
    if (cell_of_atom[a] < 0) out.push_back(static_cast<int>(a));
  }
  return out;
}

AtomSet DyadicModel::atoms_in_cells(const std::vector<int>& cells) const {
  std::vector<bool> wanted(static_cast<std::size_t>(cell_count()), false);
  for (int c : cells) wanted.at(static_cast<std::size_t>(c)) = true;
  AtomSet out;
  for (std::size_t a = 0; a < cell_of_atom.size(); ++a) {
    int c = cell_of_atom[a];
    if (c >= 0 && wanted[static_cast<std::size_t>(c)]) out.push_back(static_cast<int>(a));
  }
  return out;
}

DyadicModel build_dyadic_model(const Rational& gamma, int level, int per_block) {
  if (gamma < Rational(0) || gamma >= Rational(1)) {
    throw PreconditionError("gamma must lie in [0, 1), got " + gamma.str());
  }
  if (level < 0 || level > 20) throw DimensionError("dyadic level out of range");
  if (per_block < 1) throw PreconditionError("per_block must be >= 1");

  std::vector<Rational> masses;
  std::vector<int> cell_of_atom;
  std::vector<int> block_label;
  int label = 0;
  if (!gamma.is_zero()) {
    for (int s = 0; s < per_block; ++s) {
      masses.push_back(gamma / Rational(per_block));
      cell_of_atom.push_back(-1);
      block_label.push_back(label);
    }
    ++label;
  }
  const Rational sub_mass = (Rational(1) - gamma) / Rational(std::int64_t{per_block} << level);
  for (int cell = 0; cell < (1 << level); ++cell, ++label) {
    for (int s = 0; s < per_block; ++s) {
      masses.push_back(sub_mass);
      cell_of_atom.push_back(cell);
      block_label.push_back(label);
    }
  }
  auto space = std::make_shared<const DiscreteSpace>(std::move(masses), "dyadic");
  const int n = space->size();
  return DyadicModel{space,
                     SigmaPartition::from_labels(block_label),
                     SigmaPartition::singletons(n),
                     gamma,
                     level,
                     per_block,
                     std::move(cell_of_atom)};
}

StepFunction::StepFunction(Rational gamma, int level, std::vector<TruncVector> cells)
    : gamma_(std::move(gamma)), level_(level), cells_(std::move(cells)) {
  if (cells_.size() != (std::size_t{1} << level_)) {
    throw DimensionError("step function needs 2^L cell values");
  }
}

TruncVector StepFunction::eval(double l) const {
  const double g = gamma_.to_double();
  if (l <= g) return TruncVector(dim());
  const double u = (l - g) / (1.0 - g);
  auto cell = static_cast<std::int64_t>(std::floor(std::ldexp(u, level_)));
  cell = std::clamp<std::int64_t>(cell, 0, static_cast<std::int64_t>(cells_.size()) - 1);
  return cells_[static_cast<std::size_t>(cell)];
}

TruncVector StepFunction::integral() const {
  TruncVector acc(dim());
  for (const auto& v : cells_) acc += v;
  acc *= (Rational(1) - gamma_).to_double() / static_cast<double>(cells_.size());
  return acc;
}

std::vector<StepFunction> build_psi(const Workspace& ws, int k, const Rational& gamma, int N, int L) {
  if (k < 1) throw PreconditionError("k must be >= 1");
  if (N < 0) throw PreconditionError("Walsh truncation N must be >= 0");
  ws.require_dim(static_cast<std::size_t>(k) * static_cast<std::size_t>(N + 1), "Walsh series");
  if (L < bit_length(static_cast<std::uint64_t>(N))) {
    throw DimensionError("level " + std::to_string(L) + " too coarse for W_" + std::to_string(N));
  }
  if (gamma < Rational(0) || gamma >= Rational(1)) throw PreconditionError("gamma must lie in [0, 1)");
  std::vector<StepFunction> out;
  for (int j = 1; j <= k; ++j) {
    std::vector<TruncVector> cells;
    for (int cell = 0; cell < (1 << L); ++cell) {
      TruncVector v = ws.zero();
      for (int n = 0; n <= N; ++n) {
        const auto idx = static_cast<std::size_t>(k * n + j - 1);
        v[idx] += std::ldexp(static_cast<double>(walsh_cell_sign(static_cast<std::uint64_t>(n),
                                                                 static_cast<std::uint64_t>(cell), L)),
                             -n);
      }
      cells.push_back(std::move(v));
    }
    out.emplace_back(gamma, L, std::move(cells));
  }
  return out;
}

TruncVector CounterexampleBundle::e_mean() const {
  TruncVector acc(e_list.front().dim());
  for (const auto& e : e_list) acc += e;
  return acc * (1.0 / static_cast<double>(k + 1));
}

std::vector<Selection> CounterexampleBundle::pure_selections() const {
  std::vector<Selection> out;
  const std::size_t dim = corr->dim();
  const int atoms = model.space->size();
  for (int j = 0; j <= k; ++j) {
    std::vector<TruncVector> choice;
    choice.reserve(static_cast<std::size_t>(atoms));
    for (int t = 0; t < atoms; ++t) {
      const int cell = model.cell_of_atom[static_cast<std::size_t>(t)];
      if (j == 0 || cell < 0) {
        choice.emplace_back(dim);
      } else {
        choice.push_back(f_list[static_cast<std::size_t>(j - 1)].cell_value(cell));
      }
    }
    out.emplace_back(corr, model.f_alg, std::move(choice));
  }
  return out;
}

CounterexampleBundle build_counterexample(const Workspace& ws, int k, const Rational& gamma, int N,
                                          int L, int per_block) {
  CounterexampleBundle b;
  b.k = k;
  b.gamma = gamma;
  b.N = N;
  b.L = L;
  b.f_list = build_psi(ws, k, gamma, N, L);
  b.model = build_dyadic_model(gamma, L, per_block);

  // Exact dyadic integration: only the coefficient of x_{kn+j-1} depends on
  // W_n, and ∫ W_n over (gamma, 1] is (1-gamma) * ∫_0^1 W_n.
  for (int j = 1; j <= k; ++j) {
    TruncVector e = ws.zero();
    for (int n = 0; n <= N; ++n) {
      const Rational w = walsh_integral(static_cast<std::uint64_t>(n), Rational(0), Rational(1), L);
      const Rational coeff = b.model.t1_mass() * w / Rational(std::int64_t{1} << n);
      e[static_cast<std::size_t>(k * n + j - 1)] = coeff.to_double();
    }
    b.e_list.push_back(std::move(e));
  }

  std::vector<std::vector<TruncVector>> values;
  for (int t = 0; t < b.model.space->size(); ++t) {
    const int cell = b.model.cell_of_atom[static_cast<std::size_t>(t)];
    std::vector<TruncVector> set{ws.zero()};
    if (cell >= 0) {
      for (const auto& f : b.f_list) set.push_back(f.cell_value(cell));
    }
    values.push_back(std::move(set));
  }
  b.corr = std::make_shared<const Correspondence>(b.model.space, std::move(values));
  return b;
}

}  // namespace corrint
