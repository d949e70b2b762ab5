#include "kd_tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace corrint::detail {

namespace {
constexpr std::size_t kLeafSize = 16;
}

KdTree::KdTree(std::size_t dim, std::vector<double> flat) : dim_(dim), flat_(std::move(flat)) {
  perm_.resize(dim_ == 0 ? 0 : flat_.size() / dim_);
  std::iota(perm_.begin(), perm_.end(), std::size_t{0});
  if (!perm_.empty()) build(0, perm_.size());
}

int KdTree::build(std::size_t begin, std::size_t end) {
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back(Node{begin, end});
  if (end - begin <= kLeafSize) return id;

  std::size_t axis = 0;
  double widest = -1.0;
  for (std::size_t a = 0; a < dim_; ++a) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = begin; i < end; ++i) {
      lo = std::min(lo, coord(perm_[i], a));
      hi = std::max(hi, coord(perm_[i], a));
    }
    if (hi - lo > widest) {
      widest = hi - lo;
      axis = a;
    }
  }
  if (widest <= 0.0) return id;

  const std::size_t mid = begin + (end - begin) / 2;
  std::nth_element(perm_.begin() + static_cast<std::ptrdiff_t>(begin),
                   perm_.begin() + static_cast<std::ptrdiff_t>(mid),
                   perm_.begin() + static_cast<std::ptrdiff_t>(end),
                   [&](std::size_t x, std::size_t y) { return coord(x, axis) < coord(y, axis); });
  const double split = coord(perm_[mid], axis);
  const int left = build(begin, mid);
  const int right = build(mid, end);
  Node& n = nodes_[static_cast<std::size_t>(id)];
  n.axis = static_cast<int>(axis);
  n.split = split;
  n.left = left;
  n.right = right;
  return id;
}

KdTree::Hit KdTree::nearest(std::span<const double> q, const Metric& metric) const {
  Hit best{0, std::numeric_limits<double>::infinity()};
  if (!nodes_.empty()) search(0, q, metric, best);
  return best;
}

void KdTree::search(int node_id, std::span<const double> q, const Metric& metric, Hit& best) const {
  const Node& node = nodes_[static_cast<std::size_t>(node_id)];
  if (node.axis < 0) {
    for (std::size_t i = node.begin; i < node.end; ++i) {
      const std::size_t p = perm_[i];
      const double d = metric.distance(q, std::span<const double>(flat_.data() + p * dim_, dim_));
      if (d < best.distance || (d == best.distance && p < best.index)) best = Hit{p, d};
    }
    return;
  }
  const auto axis = static_cast<std::size_t>(node.axis);
  const double diff = q[axis] - node.split;
  const int first = diff < 0 ? node.left : node.right;
  const int second = diff < 0 ? node.right : node.left;
  search(first, q, metric, best);
  if (metric.axis_weight(axis) * std::fabs(diff) <= best.distance) search(second, q, metric, best);
}

}  // namespace corrint::detail
