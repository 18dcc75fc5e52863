#include "treepark/treegen.hpp"

#include <algorithm>
#include <numeric>

#include "treepark/errors.hpp"

namespace treepark {

ModelSamplers::ModelSamplers(const Model& m) {
  const Pmf& nu = m.offspring().law;
  nu_ = CdfSampler(nu);
  std::vector<double> sb(nu.support(), 0.0);
  for (std::size_t k = 1; k < nu.support(); ++k) sb[k] = static_cast<double>(k) * nu[k];
  nubar_ = CdfSampler(Pmf(std::move(sb), /*renormalize=*/true));
  mu_.reserve(m.arrivals().laws.size());
  for (const Pmf& law : m.arrivals().laws) mu_.emplace_back(law);
  mu_default_ = CdfSampler(m.arrivals().default_law);
}

bool sample_gw_degrees(const ModelSamplers& s, Rng& rng, std::size_t size_cap,
                       std::vector<std::int32_t>& degrees) {
  degrees.clear();
  std::int64_t open = 1;
  while (open > 0) {
    if (degrees.size() >= size_cap) return false;
    const std::uint32_t d = s.sample_offspring(rng);
    degrees.push_back(static_cast<std::int32_t>(d));
    open += static_cast<std::int64_t>(d) - 1;
  }
  return true;
}

std::optional<PlaneTree> sample_gw(const ModelSamplers& s, Rng& rng, std::size_t size_cap) {
  std::vector<std::int32_t> degrees;
  if (!sample_gw_degrees(s, rng, size_cap, degrees)) return std::nullopt;
  return PlaneTree::from_degrees(std::move(degrees));
}

std::optional<PlaneTree> sample_gw(const Model& m, Rng& rng, std::size_t size_cap) {
  return sample_gw(ModelSamplers(m), rng, size_cap);
}

std::size_t cycle_lemma_rotation(std::span<const std::int32_t> degrees) {
  std::int64_t s = 0, min = 0;
  std::size_t argmin = 0;
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    s += degrees[i] - 1;
    if (s < min) {  // strict: keep the first index attaining the minimum
      min = s;
      argmin = i;
    }
  }
  return (argmin + 1) % degrees.size();
}

bool conditioned_size_reachable(const Model& m, std::size_t n) {
  const Pmf& nu = m.offspring().law;
  if (n == 0) return false;
  if (n == 1) return nu[0] > 0.0;
  if (nu[0] == 0.0) return false;  // excluded by criticality + nu != delta_1 anyway
  // Need c_k >= 0 with sum_k c_k = n and sum_k k c_k = n - 1, i.e. n-1 must
  // be a sum of elements of {k >= 1 : nu_k > 0}. Boolean DP up to n-1.
  if (nu[1] > 0.0) return true;  // pad with degree-1 vertices
  std::vector<std::size_t> coins;
  for (std::size_t k = 2; k < nu.support(); ++k)
    if (nu[k] > 0.0) coins.push_back(k);
  std::vector<char> reach(n, 0);
  reach[0] = 1;
  for (std::size_t v = 1; v <= n - 1; ++v)
    for (std::size_t c : coins)
      if (c <= v && reach[v - c]) {
        reach[v] = 1;
        break;
      }
  // also ensure the vertex budget: j internal vertices with sum of degrees
  // n-1 plus (n - j) leaves always fits since j <= n - 1 < n
  return reach[n - 1];
}

PlaneTree sample_gw_conditioned(const ModelSamplers& s, const Model& m, std::size_t n,
                                Rng& rng) {
  if (!conditioned_size_reachable(m, n))
    throw Error(Errc::UnreachableSize, "P(|T| = " + std::to_string(n) + ") = 0");
  std::vector<std::int32_t> degrees(n);
  const std::int64_t target = static_cast<std::int64_t>(n) - 1;
  for (;;) {
    std::int64_t sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint32_t d = s.sample_offspring(rng);
      degrees[i] = static_cast<std::int32_t>(d);
      sum += d;
    }
    if (sum == target) break;
  }
  const std::size_t r = cycle_lemma_rotation(degrees);
  std::rotate(degrees.begin(), degrees.begin() + static_cast<std::ptrdiff_t>(r), degrees.end());
  return PlaneTree::from_degrees(std::move(degrees));
}

PlaneTree sample_gw_conditioned(const Model& m, std::size_t n, Rng& rng) {
  return sample_gw_conditioned(ModelSamplers(m), m, n, rng);
}

std::optional<SpineTree> sample_spine_tree(const ModelSamplers& s, std::size_t h, Rng& rng,
                                           std::size_t size_cap) {
  // Emits the depth-first degree sequence of T(h) directly: spine vertex S_i
  // (i < h) has Y ~ nubar children with S_{i+1} at a uniform position; S_h
  // has X ~ nu children; every non-spine child is an independent GW tree.
  std::vector<std::int32_t> degrees;
  std::vector<std::int32_t> spine;
  spine.reserve(h + 1);

  // grafts one full GW subtree (iterative walk, bounded by the global cap)
  auto graft = [&]() -> bool {
    std::int64_t open = 1;
    while (open > 0) {
      if (degrees.size() >= size_cap) return false;
      const std::uint32_t d = s.sample_offspring(rng);
      degrees.push_back(static_cast<std::int32_t>(d));
      open += static_cast<std::int64_t>(d) - 1;
    }
    return true;
  };

  // spine levels, recursive in depth-first position (depth bounded by h)
  auto spine_level = [&](auto&& self, std::size_t level) -> bool {
    if (degrees.size() >= size_cap) return false;
    spine.push_back(static_cast<std::int32_t>(degrees.size()));
    if (level == h) {
      const std::uint32_t d = s.sample_offspring(rng);
      degrees.push_back(static_cast<std::int32_t>(d));
      for (std::uint32_t c = 0; c < d; ++c)
        if (!graft()) return false;
      return true;
    }
    const std::uint32_t y = s.sample_sb_offspring(rng);
    const std::uint64_t pos = rng.below(y);  // y >= 1 by construction of nubar
    degrees.push_back(static_cast<std::int32_t>(y));
    for (std::uint32_t c = 0; c < y; ++c) {
      if (c == pos) {
        if (!self(self, level + 1)) return false;
      } else {
        if (!graft()) return false;
      }
    }
    return true;
  };

  if (!spine_level(spine_level, 0)) return std::nullopt;
  SpineTree st;
  st.tree = PlaneTree::from_degrees(std::move(degrees));
  st.spine = std::move(spine);
  return st;
}

std::optional<SpineTree> sample_spine_tree(const Model& m, std::size_t h, Rng& rng,
                                           std::size_t size_cap) {
  return sample_spine_tree(ModelSamplers(m), h, rng, size_cap);
}

void sample_arrivals_into(std::span<const std::int32_t> degrees, const ModelSamplers& s,
                          Rng& rng, std::vector<std::int32_t>& out) {
  out.resize(degrees.size());
  for (std::size_t i = 0; i < degrees.size(); ++i)
    out[i] = static_cast<std::int32_t>(
        s.sample_arrival(static_cast<std::uint32_t>(degrees[i]), rng));
}

std::vector<std::int32_t> sample_arrivals(const PlaneTree& tree, const Model& m, Rng& rng) {
  ModelSamplers s(m);
  std::vector<std::int32_t> out;
  sample_arrivals_into(tree.degrees(), s, rng, out);
  return out;
}

}  // namespace treepark
