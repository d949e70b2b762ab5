#include "point_index.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>

#include "corrint/errors.hpp"

namespace corrint::detail {

namespace {

constexpr double kMaxCoordinate = 1e6;

std::uint64_t mix(std::uint64_t h) {
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 33;
  h *= 0xc4ceb9fe1a85ec53ULL;
  h ^= h >> 33;
  return h;
}

}  // namespace

PointIndex::PointIndex(std::size_t dim, double snap)
    : dim_(dim), inv_snap_(1.0 / snap), scratch_(dim), table_(64, 0) {}

std::uint64_t PointIndex::hash_key(const std::int64_t* key) const {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (std::size_t i = 0; i < dim_; ++i) h = mix(h ^ static_cast<std::uint64_t>(key[i]));
  return h;
}

void PointIndex::grow() {
  std::vector<std::uint32_t> bigger(table_.size() * 2, 0);
  const std::size_t mask = bigger.size() - 1;
  for (std::size_t i = 0; i < count_; ++i) {
    std::size_t slot = hash_key(keys_.data() + i * dim_) & mask;
    while (bigger[slot] != 0) slot = (slot + 1) & mask;
    bigger[slot] = static_cast<std::uint32_t>(i + 1);
  }
  table_.swap(bigger);
}

bool PointIndex::insert(std::span<const double> p) {
  for (std::size_t i = 0; i < dim_; ++i) {
    if (!(std::fabs(p[i]) <= kMaxCoordinate)) {
      throw Error("coordinate outside the supported range for point deduplication");
    }
    scratch_[i] = std::llround(p[i] * inv_snap_);
  }
  const std::size_t mask = table_.size() - 1;
  std::size_t slot = hash_key(scratch_.data()) & mask;
  while (table_[slot] != 0) {
    const std::size_t idx = table_[slot] - 1;
    if (std::memcmp(keys_.data() + idx * dim_, scratch_.data(), dim_ * sizeof(std::int64_t)) == 0) {
      return false;
    }
    slot = (slot + 1) & mask;
  }
  if (count_ >= 0xfffffff0U) throw Error("point index full");
  table_[slot] = static_cast<std::uint32_t>(count_ + 1);
  coords_.insert(coords_.end(), p.begin(), p.end());
  keys_.insert(keys_.end(), scratch_.begin(), scratch_.end());
  ++count_;
  if (count_ * 2 > table_.size()) grow();
  return true;
}

std::vector<std::size_t> PointIndex::canonical_order() const {
  std::vector<std::size_t> order(count_);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const std::int64_t* ka = keys_.data() + a * dim_;
    const std::int64_t* kb = keys_.data() + b * dim_;
    return std::lexicographical_compare(ka, ka + dim_, kb, kb + dim_);
  });
  return order;
}

}  // namespace corrint::detail
