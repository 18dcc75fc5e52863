#include "treepark/tree.hpp"

#include <charconv>

#include "treepark/errors.hpp"

namespace treepark {

PlaneTree PlaneTree::from_degrees(std::vector<std::int32_t> degrees) {
  const std::size_t n = degrees.size();
  if (n == 0) throw Error(Errc::InvalidExcursion, "empty degree sequence");
  PlaneTree t;
  t.degrees_ = std::move(degrees);
  t.parent_.assign(n, -1);
  // walk + parent reconstruction in one pass; open[] tracks vertices with
  // unfilled child slots
  std::int64_t s = 0;
  std::vector<std::pair<std::int32_t, std::int32_t>> open;  // (vertex, remaining children)
  for (std::size_t i = 0; i < n; ++i) {
    const std::int32_t d = t.degrees_[i];
    if (d < 0) throw Error(Errc::InvalidExcursion, "negative degree");
    if (i > 0) {
      while (!open.empty() && open.back().second == 0) open.pop_back();
      if (open.empty())
        throw Error(Errc::InvalidExcursion, "walk hits -1 before the last vertex");
      t.parent_[i] = open.back().first;
      --open.back().second;
    }
    open.emplace_back(static_cast<std::int32_t>(i), d);
    s += d - 1;
  }
  if (s != -1)
    throw Error(Errc::InvalidExcursion, "degree sum is " + std::to_string(s + n) +
                                            ", expected " + std::to_string(n - 1));
  while (!open.empty() && open.back().second == 0) open.pop_back();
  if (!open.empty()) throw Error(Errc::InvalidExcursion, "unfilled child slots remain");
  return t;
}

PlaneTree PlaneTree::from_lukasiewicz(std::span<const std::int64_t> walk) {
  if (walk.size() < 2 || walk.front() != 0)
    throw Error(Errc::InvalidExcursion, "walk must start at 0 and have at least one step");
  std::vector<std::int32_t> degrees(walk.size() - 1);
  for (std::size_t i = 0; i + 1 < walk.size(); ++i) {
    const std::int64_t step = walk[i + 1] - walk[i];
    if (step < -1) throw Error(Errc::InvalidExcursion, "step below -1");
    degrees[i] = static_cast<std::int32_t>(step + 1);
  }
  return from_degrees(std::move(degrees));
}

std::vector<std::int64_t> PlaneTree::lukasiewicz() const {
  std::vector<std::int64_t> walk(size() + 1);
  walk[0] = 0;
  for (std::size_t i = 0; i < size(); ++i) walk[i + 1] = walk[i] + degrees_[i] - 1;
  return walk;
}

std::vector<std::int32_t> PlaneTree::subtree_sizes() const {
  const std::size_t n = size();
  std::vector<std::int32_t> sz(n, 1);
  for (std::size_t i = n; i-- > 1;) sz[parent_[i]] += sz[i];
  return sz;
}

std::vector<std::int32_t> PlaneTree::depths() const {
  std::vector<std::int32_t> d(size(), 0);
  for (std::size_t i = 1; i < size(); ++i) d[i] = d[parent_[i]] + 1;
  return d;
}

std::string PlaneTree::to_line() const { return format_count_line(degrees_); }

PlaneTree PlaneTree::from_line(std::string_view line) {
  return from_degrees(parse_count_line(line));
}

std::vector<std::int32_t> parse_count_line(std::string_view line) {
  std::vector<std::int32_t> out;
  const char* p = line.data();
  const char* end = p + line.size();
  while (p < end) {
    while (p < end && (*p == ' ' || *p == '\t' || *p == '\r' || *p == '\n')) ++p;
    if (p == end) break;
    std::int32_t v = 0;
    auto [next, ec] = std::from_chars(p, end, v);
    if (ec != std::errc() || v < 0)
      throw Error(Errc::ConfigError, "bad count token in line");
    out.push_back(v);
    p = next;
  }
  return out;
}

std::string format_count_line(std::span<const std::int32_t> counts) {
  std::string s;
  s.reserve(counts.size() * 3);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (i) s.push_back(' ');
    s += std::to_string(counts[i]);
  }
  return s;
}

}  // namespace treepark
