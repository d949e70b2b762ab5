#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace corrint::detail {

/// Hash set of points keyed by coordinates snapped to a fixed lattice.
/// Points are stored flat, in insertion order.
class PointIndex {
 public:
  PointIndex(std::size_t dim, double snap);

  /// Inserts `p` unless a point with the same snapped key exists.
  /// Returns true when the point was new.
  bool insert(std::span<const double> p);

  std::size_t size() const { return count_; }
  std::size_t dim() const { return dim_; }
  std::span<const double> point(std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }
  const std::vector<double>& coords() const { return coords_; }
  std::span<const std::int64_t> key(std::size_t i) const { return {keys_.data() + i * dim_, dim_}; }

  /// Indices sorted by snapped key, lexicographically.
  std::vector<std::size_t> canonical_order() const;

 private:
  std::uint64_t hash_key(const std::int64_t* key) const;
  void grow();

  std::size_t dim_;
  double inv_snap_;
  std::size_t count_ = 0;
  std::vector<double> coords_;
  std::vector<std::int64_t> keys_;
  std::vector<std::int64_t> scratch_;
  std::vector<std::uint32_t> table_;  // 0 = empty, else index + 1
};

}  // namespace corrint::detail
