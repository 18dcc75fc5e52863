#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace treepark {

/// Rooted plane tree stored as flat depth-first arrays. degrees[i] is the
/// number of children of the i-th vertex in depth-first order; parent[i]
/// precedes i, with parent[0] = -1.
class PlaneTree {
 public:
  PlaneTree() = default;

  /// Validates the Lukasiewicz excursion property (S_i >= 0 for i < n,
  /// S_n = -1) and reconstructs parents. Throws InvalidExcursion.
  static PlaneTree from_degrees(std::vector<std::int32_t> degrees);

  /// Inverse of lukasiewicz(): walk is S_0..S_n with S_0 = 0.
  static PlaneTree from_lukasiewicz(std::span<const std::int64_t> walk);

  /// S_i = sum_{j<i} (degrees_j - 1); length size()+1, ends at -1.
  std::vector<std::int64_t> lukasiewicz() const;

  std::size_t size() const { return degrees_.size(); }
  std::int32_t degree(std::size_t i) const { return degrees_[i]; }
  std::int32_t parent(std::size_t i) const { return parent_[i]; }
  const std::vector<std::int32_t>& degrees() const { return degrees_; }
  const std::vector<std::int32_t>& parents() const { return parent_; }

  /// Subtree of vertex i occupies the contiguous slice [i, i + size).
  std::vector<std::int32_t> subtree_sizes() const;
  std::vector<std::int32_t> depths() const;

  /// Space-separated depth-first children counts, e.g. "2 2 0 0 3 2 0 0 0 1 0".
  std::string to_line() const;
  static PlaneTree from_line(std::string_view line);

 private:
  std::vector<std::int32_t> degrees_;
  std::vector<std::int32_t> parent_;
};

/// Parses a whitespace-separated line of nonnegative integers (the format
/// shared by tree and arrival lines).
std::vector<std::int32_t> parse_count_line(std::string_view line);
std::string format_count_line(std::span<const std::int32_t> counts);

}  // namespace treepark
