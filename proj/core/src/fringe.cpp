#include "treepark/fringe.hpp"

#include "treepark/errors.hpp"

namespace treepark {

namespace {

void describe(FringePattern& p) {
  // depth profile from the degree sequence
  std::vector<std::int32_t> depth(p.degrees.size(), 0);
  std::vector<std::pair<std::int32_t, std::int32_t>> open;  // (depth, remaining)
  p.height = 0;
  for (std::size_t i = 0; i < p.degrees.size(); ++i) {
    if (i > 0) {
      while (open.back().second == 0) open.pop_back();
      depth[i] = open.back().first + 1;
      --open.back().second;
    }
    open.emplace_back(depth[i], p.degrees[i]);
    if (depth[i] > p.height) p.height = depth[i];
  }
  p.depth_counts.assign(static_cast<std::size_t>(p.height) + 1, 0);
  for (std::int32_t d : depth) ++p.depth_counts[d];
}

}  // namespace

std::vector<FringePattern> enumerate_patterns(const Pmf& nu, std::size_t max_size) {
  if (max_size > 8) throw Error(Errc::ConfigError, "pattern size capped at 8");
  std::vector<FringePattern> out;
  std::vector<std::int32_t> seq;
  // depth-first enumeration of excursions: `slots` child positions remain
  auto rec = [&](auto&& self, std::size_t slots, double weight) -> void {
    if (slots == 0) {
      FringePattern p;
      p.degrees = seq;
      p.gw_weight = weight;
      describe(p);
      out.push_back(std::move(p));
      return;
    }
    if (seq.size() + slots > max_size) return;  // every slot costs a vertex
    for (std::size_t d = 0; d < nu.support(); ++d) {
      if (nu[d] == 0.0) continue;
      if (seq.size() + 1 + (slots - 1) + d > max_size) break;
      seq.push_back(static_cast<std::int32_t>(d));
      self(self, slots - 1 + d, weight * nu[d]);
      seq.pop_back();
    }
  };
  rec(rec, 1, 1.0);
  return out;
}

std::uint64_t pack_degrees(std::span<const std::int32_t> degrees) {
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < degrees.size(); ++i)
    key |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(degrees[i])) << (8 * i);
  return key;
}

PatternIndex::PatternIndex(const Pmf& nu, std::size_t max_size, std::size_t min_height)
    : max_size_(max_size) {
  for (auto& p : enumerate_patterns(nu, max_size)) {
    if (static_cast<std::size_t>(p.height) < min_height) continue;
    by_key_.emplace(pack_degrees(p.degrees), static_cast<std::int32_t>(patterns_.size()));
    patterns_.push_back(std::move(p));
  }
}

std::int32_t PatternIndex::find(std::span<const std::int32_t> slice) const {
  if (slice.size() > max_size_) return -1;
  for (std::int32_t d : slice)
    if (d > 255) return -1;
  const auto it = by_key_.find(pack_degrees(slice));
  return it == by_key_.end() ? -1 : it->second;
}

}  // namespace treepark
