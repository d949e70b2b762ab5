#include "corrint/measure_space.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "corrint/errors.hpp"

namespace corrint {

AtomSet make_atom_set(std::vector<int> atoms) {
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  return atoms;
}

AtomSet set_intersection(const AtomSet& a, const AtomSet& b) {
  AtomSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

DiscreteSpace::DiscreteSpace(std::vector<Rational> masses, std::string label)
    : masses_(std::move(masses)), label_(std::move(label)) {
  if (masses_.empty()) throw StructuralError("discrete space needs at least one atom");
  Rational total;
  for (std::size_t i = 0; i < masses_.size(); ++i) {
    if (masses_[i] <= Rational(0)) {
      throw StructuralError("atom " + std::to_string(i) + " has non-positive mass " +
                            masses_[i].str());
    }
    total += masses_[i];
  }
  if (total != Rational(1)) {
    throw StructuralError("atom masses sum to " + total.str() + ", expected 1");
  }
}

DiscreteSpace DiscreteSpace::uniform(int atoms, std::string label) {
  if (atoms <= 0) throw StructuralError("uniform space needs a positive atom count");
  return DiscreteSpace(std::vector<Rational>(static_cast<std::size_t>(atoms), Rational(1, atoms)),
                       std::move(label));
}

const Rational& DiscreteSpace::mass(int atom) const {
  if (atom < 0 || atom >= size()) {
    throw StructuralError("atom " + std::to_string(atom) + " outside space of size " +
                          std::to_string(size()));
  }
  return masses_[static_cast<std::size_t>(atom)];
}

Rational DiscreteSpace::mass_of(std::span<const int> atoms) const {
  Rational total;
  for (int a : atoms) total += mass(a);
  return total;
}

SigmaPartition::SigmaPartition(int atom_count, std::vector<AtomSet> blocks) {
  if (atom_count <= 0) throw StructuralError("partition over an empty universe");
  block_of_.assign(static_cast<std::size_t>(atom_count), -1);
  for (auto& b : blocks) {
    std::sort(b.begin(), b.end());
    if (b.empty()) throw StructuralError("partition has an empty block");
  }
  std::sort(blocks.begin(), blocks.end(),
            [](const AtomSet& a, const AtomSet& b) { return a.front() < b.front(); });
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    for (int a : blocks[i]) {
      if (a < 0 || a >= atom_count) {
        throw StructuralError("atom " + std::to_string(a) + " outside universe of size " +
                              std::to_string(atom_count));
      }
      auto& slot = block_of_[static_cast<std::size_t>(a)];
      if (slot != -1) throw StructuralError("atom " + std::to_string(a) + " in two blocks");
      slot = static_cast<int>(i);
    }
  }
  for (std::size_t a = 0; a < block_of_.size(); ++a) {
    if (block_of_[a] == -1) {
      throw StructuralError("atom " + std::to_string(a) + " not covered by any block");
    }
  }
  blocks_ = std::move(blocks);
}

SigmaPartition SigmaPartition::singletons(int atom_count) {
  std::vector<AtomSet> blocks;
  blocks.reserve(static_cast<std::size_t>(atom_count));
  for (int a = 0; a < atom_count; ++a) blocks.push_back({a});
  return SigmaPartition(atom_count, std::move(blocks));
}

SigmaPartition SigmaPartition::trivial(int atom_count) {
  AtomSet all(static_cast<std::size_t>(atom_count));
  for (int a = 0; a < atom_count; ++a) all[static_cast<std::size_t>(a)] = a;
  return SigmaPartition(atom_count, {std::move(all)});
}

SigmaPartition SigmaPartition::from_labels(std::span<const int> labels) {
  std::map<int, AtomSet> groups;
  for (std::size_t a = 0; a < labels.size(); ++a) groups[labels[a]].push_back(static_cast<int>(a));
  std::vector<AtomSet> blocks;
  for (auto& [label, atoms] : groups) blocks.push_back(std::move(atoms));
  return SigmaPartition(static_cast<int>(labels.size()), std::move(blocks));
}

namespace {

void require_same_universe(const SigmaPartition& a, const SigmaPartition& b) {
  if (a.atom_count() != b.atom_count()) {
    throw StructuralError("partitions over different universes (" +
                          std::to_string(a.atom_count()) + " vs " +
                          std::to_string(b.atom_count()) + " atoms)");
  }
}

}  // namespace

bool is_refinement(const SigmaPartition& fine, const SigmaPartition& coarse) {
  require_same_universe(fine, coarse);
  for (const auto& block : fine.blocks()) {
    int target = coarse.block_of(block.front());
    for (int a : block) {
      if (coarse.block_of(a) != target) return false;
    }
  }
  return true;
}

SigmaPartition common_refinement(const SigmaPartition& a, const SigmaPartition& b) {
  require_same_universe(a, b);
  std::map<std::pair<int, int>, AtomSet> cells;
  for (int t = 0; t < a.atom_count(); ++t) cells[{a.block_of(t), b.block_of(t)}].push_back(t);
  std::vector<AtomSet> blocks;
  for (auto& [key, atoms] : cells) blocks.push_back(std::move(atoms));
  return SigmaPartition(a.atom_count(), std::move(blocks));
}

bool is_nowhere_equivalent(const SigmaPartition& t_alg, const SigmaPartition& f_alg) {
  if (!is_refinement(t_alg, f_alg)) {
    throw PreconditionError("nowhere equivalence needs t_alg to refine f_alg");
  }
  std::vector<int> sub_blocks(f_alg.block_count(), 0);
  for (const auto& block : t_alg.blocks()) ++sub_blocks[static_cast<std::size_t>(f_alg.block_of(block.front()))];
  return std::all_of(sub_blocks.begin(), sub_blocks.end(), [](int c) { return c >= 2; });
}

SupplementPartition build_independent_supplement(const DiscreteSpace& space,
                                                 const SigmaPartition& f_alg, int n) {
  if (n < 1) throw PreconditionError("supplement needs n >= 1");
  if (f_alg.atom_count() != space.size()) {
    throw StructuralError("partition and space have different atom counts");
  }
  SupplementPartition out;
  out.parts.resize(static_cast<std::size_t>(n));
  for (std::size_t b = 0; b < f_alg.block_count(); ++b) {
    const AtomSet& block = f_alg.block(b);
    const Rational share = space.mass_of(block) / Rational(n);
    Rational filled;
    int part = 0;
    for (int atom : block) {
      filled += space.mass(atom);
      out.parts[static_cast<std::size_t>(part)].push_back(atom);
      const Rational boundary = share * Rational(part + 1);
      if (filled > boundary) {
        std::string members;
        for (int a : block) members += (members.empty() ? "" : ",") + std::to_string(a);
        throw DivisibilityError("block {" + members + "} cannot be split into " +
                                    std::to_string(n) + " runs of mass " + share.str(),
                                static_cast<int>(b));
      }
      if (filled == boundary) ++part;
    }
  }
  for (auto& p : out.parts) std::sort(p.begin(), p.end());
  return out;
}

bool independence_product_check(const DiscreteSpace& space, const AtomSet& s, const AtomSet& d,
                                const Rational& total_mass) {
  const AtomSet both = set_intersection(s, d);
  return space.mass_of(both) * total_mass == space.mass_of(s) * space.mass_of(d);
}

Restriction restrict_space(const DiscreteSpace& space, const SigmaPartition& alg,
                           const AtomSet& d) {
  if (alg.atom_count() != space.size()) {
    throw StructuralError("partition and space have different atom counts");
  }
  const AtomSet kept = make_atom_set(d);
  for (int a : kept) space.mass(a);  // range check
  const Rational total = space.mass_of(kept);
  if (total.is_zero()) throw EmptyRestrictionError("restriction to a set of zero mass");

  std::vector<int> new_id(static_cast<std::size_t>(space.size()), -1);
  std::vector<Rational> masses;
  masses.reserve(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    new_id[static_cast<std::size_t>(kept[i])] = static_cast<int>(i);
    masses.push_back(space.mass(kept[i]) / total);
  }
  std::vector<AtomSet> blocks;
  for (const auto& block : alg.blocks()) {
    AtomSet traced;
    for (int a : block) {
      if (int id = new_id[static_cast<std::size_t>(a)]; id >= 0) traced.push_back(id);
    }
    if (!traced.empty()) blocks.push_back(std::move(traced));
  }
  const int count = static_cast<int>(kept.size());
  return Restriction{DiscreteSpace(std::move(masses), space.label()),
                     SigmaPartition(count, std::move(blocks)), kept};
}

}  // namespace corrint
