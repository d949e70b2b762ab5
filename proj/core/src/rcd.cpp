#include "corrint/rcd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "corrint/errors.hpp"

namespace corrint {

namespace {

KernelBlock normalize_block(KernelBlock in) {
  if (in.support.size() != in.weights.size()) throw StructuralError("support and weights differ in length");
  KernelBlock merged;
  for (std::size_t i = 0; i < in.support.size(); ++i) {
    if (in.weights[i] < Rational(0)) throw PreconditionError("negative kernel weight");
    if (in.weights[i].is_zero()) continue;
    auto it = std::find_if(merged.support.begin(), merged.support.end(),
                           [&](const TruncVector& v) { return nearly_equal(v, in.support[i]); });
    if (it == merged.support.end()) {
      merged.support.push_back(in.support[i]);
      merged.weights.push_back(in.weights[i]);
    } else {
      auto pos = static_cast<std::size_t>(it - merged.support.begin());
      merged.weights[pos] = merged.weights[pos] + in.weights[i];
    }
  }
  std::vector<std::size_t> order(merged.support.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return merged.support[a] < merged.support[b]; });
  KernelBlock out;
  for (std::size_t i : order) {
    out.support.push_back(merged.support[i]);
    out.weights.push_back(merged.weights[i]);
  }
  return out;
}

void require_same_blocks(const TransitionKernel& a, const TransitionKernel& b) {
  if (!(a.g_alg() == b.g_alg())) throw StructuralError("kernels are defined on different block structures");
}

/// ∫ clip(x_m, ±r) over one block distribution.
double clipped_mean(const KernelBlock& block, std::size_t m, double r) {
  double total = 0.0;
  for (std::size_t i = 0; i < block.support.size(); ++i) {
    total += block.weights[i].to_double() * std::clamp(block.support[i][m], -r, r);
  }
  return total;
}

std::size_t block_dim(const KernelBlock& block) {
  return block.support.empty() ? 0 : block.support.front().dim();
}

}  // namespace

TransitionKernel::TransitionKernel(SigmaPartition g_alg, std::vector<Rational> block_masses,
                                   std::vector<KernelBlock> blocks)
    : g_alg_(std::move(g_alg)), block_masses_(std::move(block_masses)) {
  if (block_masses_.size() != g_alg_.block_count() || blocks.size() != g_alg_.block_count()) {
    throw StructuralError("kernel needs one mass and one distribution per block");
  }
  for (auto& block : blocks) {
    KernelBlock norm = normalize_block(std::move(block));
    Rational sum(0);
    for (const auto& w : norm.weights) sum = sum + w;
    if (sum != Rational(1)) throw PreconditionError("kernel weights in a block do not sum to 1");
    blocks_.push_back(std::move(norm));
  }
}

bool operator==(const TransitionKernel& a, const TransitionKernel& b) {
  if (!(a.g_alg_ == b.g_alg_) || a.block_masses_ != b.block_masses_) return false;
  for (std::size_t i = 0; i < a.blocks_.size(); ++i) {
    const auto& x = a.blocks_[i];
    const auto& y = b.blocks_[i];
    if (x.support.size() != y.support.size() || x.weights != y.weights) return false;
    for (std::size_t j = 0; j < x.support.size(); ++j) {
      if (!nearly_equal(x.support[j], y.support[j])) return false;
    }
  }
  return true;
}

TransitionKernel rcd_of_selection(const Selection& f, const SigmaPartition& g_alg) {
  const DiscreteSpace& space = f.space();
  if (g_alg.atom_count() != space.size()) throw StructuralError("partition/space mismatch");
  std::vector<Rational> masses;
  std::vector<KernelBlock> blocks;
  for (const auto& block : g_alg.blocks()) {
    const Rational total = space.mass_of(block);
    if (total.is_zero()) throw DegenerateBlockError("conditioning on a block of zero mass");
    KernelBlock kb;
    for (int t : block) {
      kb.support.push_back(f.at(t));
      kb.weights.push_back(space.mass(t) / total);
    }
    masses.push_back(total);
    blocks.push_back(std::move(kb));
  }
  return TransitionKernel(g_alg, std::move(masses), std::move(blocks));
}

BlockFunction barycenter(const TransitionKernel& kernel) {
  BlockFunction out{kernel.g_alg(), {}};
  for (const auto& block : kernel.blocks()) {
    TruncVector v(block_dim(block));
    for (std::size_t i = 0; i < block.support.size(); ++i) {
      const double w = block.weights[i].to_double();
      for (std::size_t m = 0; m < v.dim(); ++m) v[m] += w * block.support[i][m];
    }
    out.values.push_back(std::move(v));
  }
  return out;
}

TransitionKernel kernel_mix(const TransitionKernel& k1, const TransitionKernel& k2, const Rational& alpha) {
  require_same_blocks(k1, k2);
  if (alpha < Rational(0) || alpha > Rational(1)) throw PreconditionError("mixing weight outside [0, 1]");
  const Rational beta = Rational(1) - alpha;
  std::vector<KernelBlock> blocks;
  for (std::size_t b = 0; b < k1.blocks().size(); ++b) {
    KernelBlock kb;
    for (std::size_t i = 0; i < k1.block(b).support.size(); ++i) {
      kb.support.push_back(k1.block(b).support[i]);
      kb.weights.push_back(alpha * k1.block(b).weights[i]);
    }
    for (std::size_t i = 0; i < k2.block(b).support.size(); ++i) {
      kb.support.push_back(k2.block(b).support[i]);
      kb.weights.push_back(beta * k2.block(b).weights[i]);
    }
    blocks.push_back(std::move(kb));
  }
  return TransitionKernel(k1.g_alg(), k1.block_masses(), std::move(blocks));
}

double kernel_distance(const TransitionKernel& k1, const TransitionKernel& k2, double clip_bound,
                       int clip_levels) {
  require_same_blocks(k1, k2);
  if (clip_levels < 1 || !(clip_bound > 0.0)) throw PreconditionError("test family needs a positive clip bound");
  double best = 0.0;  // the constant function integrates to 1 under both kernels
  for (std::size_t b = 0; b < k1.blocks().size(); ++b) {
    const std::size_t dim = std::max(block_dim(k1.block(b)), block_dim(k2.block(b)));
    const double mass = k1.block_masses()[b].to_double();
    for (std::size_t m = 0; m < dim; ++m) {
      for (int j = 1; j <= clip_levels; ++j) {
        const double r = clip_bound * j / clip_levels;
        const double diff = mass * std::fabs(clipped_mean(k1.block(b), m, r) - clipped_mean(k2.block(b), m, r));
        best = std::max(best, diff);
      }
    }
  }
  return best;
}

SeparationReport kernel_separation(const TransitionKernel& k1, const TransitionKernel& k2,
                                   double clip_bound, int clip_levels) {
  SeparationReport report;
  report.distance = kernel_distance(k1, k2, clip_bound, clip_levels);
  report.kernels_equal = (k1 == k2);
  for (std::size_t b = 0; b < k1.blocks().size(); ++b) {
    const std::vector<Rational> one{Rational(1)};
    TransitionKernel a(SigmaPartition::trivial(1), one, {k1.block(b)});
    TransitionKernel c(SigmaPartition::trivial(1), one, {k2.block(b)});
    if (!(a == c) && kernel_distance(a, c, clip_bound, clip_levels) == 0.0) {
      report.unseparated_blocks.push_back(static_cast<int>(b));
    }
  }
  report.separated = report.unseparated_blocks.empty();
  return report;
}

}  // namespace corrint
