#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "treepark/model.hpp"
#include "treepark/tree.hpp"

namespace treepark {

/// A fringe pattern: a plane tree of at most 8 vertices tracked by the
/// census, with its depth profile and Galton-Watson weight.
struct FringePattern {
  std::vector<std::int32_t> degrees;
  std::int32_t height = 0;
  std::vector<std::int32_t> depth_counts;  // n_j = vertices at depth j
  double gw_weight = 0.0;                  // prod_v nu(deg v)
};

/// All plane trees with size <= max_size (max 8), positive weight under nu.
std::vector<FringePattern> enumerate_patterns(const Pmf& nu, std::size_t max_size);

/// Packs a depth-first degree slice into a lookup key. Valid degree
/// sequences are never proper prefixes of one another (the excursion ends
/// exactly at the last vertex), so zero-padding cannot collide.
std::uint64_t pack_degrees(std::span<const std::int32_t> degrees);

class PatternIndex {
 public:
  PatternIndex(const Pmf& nu, std::size_t max_size, std::size_t min_height);

  const std::vector<FringePattern>& patterns() const { return patterns_; }
  /// Index of the pattern equal to this slice, or -1.
  std::int32_t find(std::span<const std::int32_t> slice) const;
  std::size_t max_size() const { return max_size_; }

 private:
  std::vector<FringePattern> patterns_;
  std::unordered_map<std::uint64_t, std::int32_t> by_key_;
  std::size_t max_size_;
};

}  // namespace treepark
