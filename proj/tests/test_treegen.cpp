#include <array>
#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "doctest.h"
#include "treepark/errors.hpp"
#include "treepark/model.hpp"
#include "treepark/rng.hpp"
#include "treepark/treegen.hpp"

using namespace treepark;

namespace {

Model geometric_poisson(double alpha, std::size_t k_max = 40) {
  return Model(make_offspring(Pmf::geometric_half(k_max)),
               uniform_arrivals(Pmf::poisson(alpha, 30), k_max));
}

Model binary_poisson(double alpha) {
  return Model(make_offspring(Pmf({0.5, 0.0, 0.5})),
               uniform_arrivals(Pmf::poisson(alpha, 20), 2));
}

}  // namespace

TEST_CASE("same seed, same tree") {
  const Model m = geometric_poisson(0.5);
  const ModelSamplers s(m);
  Rng a(mix_seed(42, 7)), b(mix_seed(42, 7));
  const auto ta = sample_gw(s, a, 100000);
  const auto tb = sample_gw(s, b, 100000);
  REQUIRE(ta.has_value());
  REQUIRE(tb.has_value());
  CHECK(ta->degrees() == tb->degrees());
  Rng c(mix_seed(42, 8));
  const auto tc = sample_gw(s, c, 100000);
  REQUIRE(tc.has_value());
  CHECK(ta->degrees() != tc->degrees());  // different replicate stream
}

TEST_CASE("P(|T| = 1) = nu_0 for binary offspring") {
  const Model m = binary_poisson(0.2);
  const ModelSamplers s(m);
  Rng rng(555);
  const std::size_t reps = 100000;
  std::size_t singletons = 0, censored = 0;
  for (std::size_t i = 0; i < reps; ++i) {
    const auto t = sample_gw(s, rng, 100000);
    if (!t)
      ++censored;
    else if (t->size() == 1)
      ++singletons;
  }
  const double p = static_cast<double>(singletons) / (reps - censored);
  const double se = std::sqrt(0.25 / (reps - censored));
  CHECK(std::abs(p - 0.5) < 3.5 * se);
}

TEST_CASE("binary exact size law by convolution for small n") {
  // p_1 = 1/2, p_n = 1/2 sum_{a+b=n-1} p_a p_b
  std::vector<double> pn(16, 0.0);
  pn[1] = 0.5;
  for (std::size_t n = 2; n <= 15; ++n) {
    double s = 0.0;
    for (std::size_t a = 1; a + 1 < n; ++a) s += pn[a] * pn[n - 1 - a];
    pn[n] = 0.5 * s;
  }
  const Model m = binary_poisson(0.2);
  const ModelSamplers s(m);
  Rng rng(808);
  const std::size_t reps = 200000;
  std::vector<std::size_t> counts(16, 0);
  std::size_t ok = 0;
  for (std::size_t i = 0; i < reps; ++i) {
    const auto t = sample_gw(s, rng, 1 << 20);
    if (!t) continue;
    ++ok;
    if (t->size() < 16) ++counts[t->size()];
  }
  for (const std::size_t n : {1, 3, 5, 7, 9}) {
    const double emp = static_cast<double>(counts[n]) / ok;
    const double se = std::sqrt(pn[n] * (1 - pn[n]) / ok);
    CHECK(std::abs(emp - pn[n]) < 4.0 * se);
  }
}

TEST_CASE("geometric size tail has the n^{-3/2} exponent") {
  const Model m = geometric_poisson(0.2);
  const ModelSamplers s(m);
  Rng rng(2024);
  const std::size_t reps = 300000;
  // dyadic bins [2^b, 2^{b+1}) for n in [16, 1024)
  std::array<std::uint64_t, 6> bins{};
  for (std::size_t i = 0; i < reps; ++i) {
    const auto t = sample_gw(s, rng, 100000);
    if (!t) continue;
    const double n = static_cast<double>(t->size());
    if (n >= 16 && n < 1024) {
      const int b = static_cast<int>(std::log2(n)) - 4;
      ++bins[static_cast<std::size_t>(b)];
    }
  }
  // least squares of log2(count) against bin index: for a density
  // ~ n^{-3/2}, dyadic bin masses scale by 2^{-1/2} per bin
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t b = 0; b < bins.size(); ++b) {
    REQUIRE(bins[b] > 100);
    const double x = static_cast<double>(b);
    const double y = std::log2(static_cast<double>(bins[b]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(bins.size());
  const double slope = (sxy - sx * sy / n) / (sxx - sx * sx / n);
  const double exponent = slope - 1.0;  // density exponent = bin slope - 1
  CHECK(std::abs(exponent - (-1.5)) < 0.15);
}

TEST_CASE("mean size grows with the cap (infinite mean at criticality)") {
  const Model m = geometric_poisson(0.2);
  const ModelSamplers s(m);
  double means[2] = {0, 0};
  const std::size_t caps[2] = {100, 10000};
  for (int c = 0; c < 2; ++c) {
    Rng rng(99);  // same stream for both caps
    double total = 0;
    std::size_t ok = 0;
    for (std::size_t i = 0; i < 20000; ++i) {
      const auto t = sample_gw(s, rng, caps[c]);
      if (t) {
        total += static_cast<double>(t->size());
        ++ok;
      }
    }
    means[c] = total / static_cast<double>(ok);
  }
  CHECK(means[1] > 3.0 * means[0]);
}

TEST_CASE("cycle lemma: every rotation result is the unique valid excursion") {
  // all binary degree words of length 9 with sum 8
  for (std::uint32_t mask = 0; mask < (1u << 9); ++mask) {
    std::vector<std::int32_t> degrees;
    for (int i = 0; i < 9; ++i) degrees.push_back((mask >> i) & 1 ? 2 : 0);
    if (std::accumulate(degrees.begin(), degrees.end(), 0) != 8) continue;
    const std::size_t rot = cycle_lemma_rotation(degrees);
    std::vector<std::int32_t> rotated(degrees.begin() + static_cast<std::ptrdiff_t>(rot),
                                      degrees.end());
    rotated.insert(rotated.end(), degrees.begin(),
                   degrees.begin() + static_cast<std::ptrdiff_t>(rot));
    CHECK_NOTHROW(PlaneTree::from_degrees(rotated));
    // uniqueness: no other rotation is a valid excursion
    std::size_t valid = 0;
    for (std::size_t r = 0; r < degrees.size(); ++r) {
      std::int64_t s = 0;
      bool ok = true;
      for (std::size_t i = 0; i < degrees.size(); ++i) {
        s += degrees[(r + i) % degrees.size()] - 1;
        if (s < 0 && i + 1 < degrees.size()) {
          ok = false;
          break;
        }
      }
      if (ok) ++valid;
    }
    CHECK(valid == 1);
  }
}

TEST_CASE("conditioned sampler: exact law for binary n <= 9") {
  // enumerate valid excursions and their conditional probabilities (all
  // binary words have equal weight, so the conditional law is uniform)
  const Model m = binary_poisson(0.2);
  const ModelSamplers s(m);
  for (const std::size_t n : {5, 7, 9}) {
    std::vector<std::vector<std::int32_t>> shapes;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      std::vector<std::int32_t> degrees;
      for (std::size_t i = 0; i < n; ++i) degrees.push_back((mask >> i) & 1 ? 2 : 0);
      if (std::accumulate(degrees.begin(), degrees.end(), std::int64_t{0}) !=
          static_cast<std::int64_t>(n - 1))
        continue;
      std::int64_t run = 0;
      bool ok = true;
      for (std::size_t i = 0; i < n; ++i) {
        run += degrees[i] - 1;
        if (run < 0 && i + 1 < n) {
          ok = false;
          break;
        }
      }
      if (ok) shapes.push_back(degrees);
    }
    REQUIRE(!shapes.empty());
    std::map<std::vector<std::int32_t>, std::size_t> counts;
    Rng rng(mix_seed(7, n));
    const std::size_t reps = n == 9 ? 1000000 : 100000;
    for (std::size_t i = 0; i < reps; ++i)
      ++counts[sample_gw_conditioned(s, m, n, rng).degrees()];
    // total-variation distance to the uniform law over shapes
    double tv = 0.0;
    const double uniform = 1.0 / static_cast<double>(shapes.size());
    std::size_t seen = 0;
    for (const auto& shape : shapes) {
      const auto it = counts.find(shape);
      const double emp =
          it == counts.end() ? 0.0 : static_cast<double>(it->second) / reps;
      seen += it == counts.end() ? 0 : it->second;
      tv += std::abs(emp - uniform);
    }
    CHECK(seen == reps);  // nothing sampled outside the enumerated shapes
    tv *= 0.5;
    CHECK(tv < 0.01);
  }
}

TEST_CASE("conditioned sampler edge cases") {
  const Model bin = binary_poisson(0.2);
  Rng rng(1);
  CHECK(sample_gw_conditioned(bin, 1, rng).size() == 1);
  CHECK_THROWS_AS(sample_gw_conditioned(bin, 4, rng), Error);
  CHECK(conditioned_size_reachable(bin, 7));
  CHECK_FALSE(conditioned_size_reachable(bin, 6));
  const Model geo = geometric_poisson(0.325);
  CHECK(conditioned_size_reachable(geo, 6));
}

TEST_CASE("conditioned geometric tree: leaf fraction matches nu_0") {
  const Model m = geometric_poisson(0.325);
  const ModelSamplers s(m);
  Rng rng(31415);
  const std::size_t n = 100, reps = 10000;
  double leaves = 0;
  for (std::size_t i = 0; i < reps; ++i) {
    const PlaneTree t = sample_gw_conditioned(s, m, n, rng);
    for (std::size_t v = 0; v < n; ++v) leaves += t.degree(v) == 0;
  }
  const double frac = leaves / static_cast<double>(n * reps);
  // per-tree leaf-count sd is O(sqrt(n)); 3 sigma with a conservative bound
  const double se = 0.5 / std::sqrt(static_cast<double>(reps * n));
  CHECK(std::abs(frac - 0.5) < 3.0 * se * 3.0);
}

TEST_CASE("spine tree structure") {
  SUBCASE("h=0 degenerates to a plain GW tree") {
    const Model m = geometric_poisson(0.325);
    Rng rng(1);
    const auto st = sample_spine_tree(m, 0, rng, 100000);
    REQUIRE(st.has_value());
    CHECK(st->spine.size() == 1);
    CHECK(st->spine[0] == 0);
  }
  SUBCASE("binary: spine vertices have degree 2 (nubar = delta_2)") {
    const Model m = binary_poisson(0.2);
    Rng rng(2);
    for (int rep = 0; rep < 200; ++rep) {
      const auto st = sample_spine_tree(m, 3, rng, 100000);
      if (!st) continue;
      REQUIRE(st->spine.size() == 4);
      for (std::size_t i = 0; i < 3; ++i) {
        CHECK(st->tree.degree(static_cast<std::size_t>(st->spine[i])) == 2);
        // spine child relation
        CHECK(st->tree.parent(static_cast<std::size_t>(st->spine[i + 1])) == st->spine[i]);
      }
    }
  }
  SUBCASE("geometric: spine degrees follow the size-biased law") {
    const Model m = geometric_poisson(0.325);
    const ModelSamplers s(m);
    Rng rng(3);
    const std::size_t reps = 20000, h = 5;
    std::map<std::int32_t, std::size_t> hist;
    std::size_t seen = 0;
    for (std::size_t i = 0; i < reps; ++i) {
      const auto st = sample_spine_tree(s, h, rng, 10000000);
      if (!st) continue;
      for (std::size_t j = 0; j < h; ++j) {
        ++hist[st->tree.degree(static_cast<std::size_t>(st->spine[j]))];
        ++seen;
      }
    }
    // nubar(k) = k 2^{-k-1}
    for (const std::int32_t k : {1, 2, 3, 4}) {
      const double expect = k * std::pow(2.0, -k - 1.0);
      const double emp = static_cast<double>(hist[k]) / static_cast<double>(seen);
      const double se = std::sqrt(expect * (1 - expect) / static_cast<double>(seen));
      CHECK(std::abs(emp - expect) < 4.0 * se);
    }
  }
}

TEST_CASE("arrivals follow the degree-indexed laws") {
  SUBCASE("delta_0 everywhere") {
    const Model m(make_offspring(Pmf::geometric_half(30)),
                  uniform_arrivals(Pmf::delta(0), 30));
    Rng rng(4);
    const auto t = sample_gw(m, rng, 10000);
    REQUIRE(t.has_value());
    const auto arr = sample_arrivals(*t, m, rng);
    CHECK(std::all_of(arr.begin(), arr.end(), [](std::int32_t a) { return a == 0; }));
  }
  SUBCASE("leaf-only deterministic arrivals") {
    const Model m(make_offspring(Pmf({0.5, 0.0, 0.5})), leaf_arrivals(Pmf::delta(2), 2));
    Rng rng(5);
    const auto t = sample_gw(m, rng, 10000);
    REQUIRE(t.has_value());
    const auto arr = sample_arrivals(*t, m, rng);
    for (std::size_t i = 0; i < t->size(); ++i)
      CHECK(arr[i] == (t->degree(i) == 0 ? 2 : 0));
  }
  SUBCASE("law of large numbers for uniform Poisson arrivals") {
    const Model m = geometric_poisson(0.325);
    const ModelSamplers s(m);
    Rng rng(6);
    std::vector<std::int32_t> degrees(100000, 0);  // a forest stand-in: all leaves
    std::vector<std::int32_t> arr;
    sample_arrivals_into(degrees, s, rng, arr);
    const double mean =
        std::accumulate(arr.begin(), arr.end(), 0.0) / static_cast<double>(arr.size());
    const double se = std::sqrt(0.325 / 100000.0);
    CHECK(std::abs(mean - 0.325) < 3.0 * se);
  }
}
