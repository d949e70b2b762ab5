#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "corrint/sequence_space.hpp"

namespace corrint::detail {

/// Static k-d tree over flat points for nearest-neighbour queries under any
/// Metric (pruning relies on Metric::axis_weight).
class KdTree {
 public:
  KdTree(std::size_t dim, std::vector<double> flat);

  struct Hit {
    std::size_t index;
    double distance;
  };
  Hit nearest(std::span<const double> q, const Metric& metric) const;
  std::size_t size() const { return perm_.size(); }

 private:
  struct Node {
    std::size_t begin, end;  // range in perm_
    int axis = -1;           // -1 for leaves
    double split = 0.0;
    int left = -1, right = -1;
  };
  int build(std::size_t begin, std::size_t end);
  void search(int node, std::span<const double> q, const Metric& metric, Hit& best) const;
  double coord(std::size_t point, std::size_t axis) const { return flat_[point * dim_ + axis]; }

  std::size_t dim_;
  std::vector<double> flat_;
  std::vector<std::size_t> perm_;
  std::vector<Node> nodes_;
};

}  // namespace corrint::detail
