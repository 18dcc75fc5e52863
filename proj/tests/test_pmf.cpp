#include <array>
#include <cmath>

#include "doctest.h"
#include "treepark/errors.hpp"
#include "treepark/pmf.hpp"
#include "treepark/rng.hpp"

using namespace treepark;

TEST_CASE("pmf validation") {
  CHECK_THROWS_AS(Pmf({0.5, -0.1, 0.6}), Error);
  CHECK_THROWS_AS(Pmf({0.5, 0.4}), Error);  // sums to 0.9
  CHECK_NOTHROW(Pmf({0.5, 0.5}));
  CHECK(Pmf({0.25, 0.25, 0.5}).support() == 3);
}

TEST_CASE("pmf moments against brute force") {
  const Pmf p({0.1, 0.2, 0.3, 0.4});
  double m = 0, m2 = 0, fact = 0;
  for (std::size_t k = 0; k < 4; ++k) {
    m += k * p[k];
    m2 += k * k * p[k];
    fact += k * (k - 1.0) * p[k];
  }
  CHECK(p.mean() == doctest::Approx(m).epsilon(1e-14));
  CHECK(p.variance() == doctest::Approx(m2 - m * m).epsilon(1e-14));
  CHECK(p.second_factorial_moment() == doctest::Approx(fact).epsilon(1e-14));
}

TEST_CASE("geometric_half is critical with variance 2") {
  const Pmf nu = Pmf::geometric_half(40);
  CHECK(std::abs(nu.mean() - 1.0) < 1e-9);
  CHECK(nu.variance() == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("poisson truncation keeps the first moments") {
  const Pmf mu = Pmf::poisson(0.325, 30);
  CHECK(mu.mean() == doctest::Approx(0.325).epsilon(1e-12));
  CHECK(mu.variance() == doctest::Approx(0.325).epsilon(1e-10));
  CHECK(mu.second_factorial_moment() == doctest::Approx(0.325 * 0.325).epsilon(1e-9));
}

TEST_CASE("dilution mixes toward delta_0") {
  const Pmf mu = Pmf::poisson(0.5, 30);
  const Pmf half = mu.diluted(0.65);
  CHECK(half.mean() == doctest::Approx(0.65 * 0.5).epsilon(1e-12));
  CHECK(mu.diluted(1.0) == mu);
  CHECK(mu.diluted(0.0).is_delta(0));
}

TEST_CASE("tilt recenters the mean") {
  const Pmf p({0.5, 0.1, 0.4});
  const Pmf t = p.tilted(2.0);
  CHECK(t.mean() > p.mean());
  CHECK(t.support() == p.support());
}

TEST_CASE("cdf sampler matches the pmf") {
  const Pmf p({0.3, 0.45, 0.05, 0.2});
  CdfSampler s(p);
  Rng rng(12345);
  std::array<std::uint64_t, 4> counts{};
  const std::size_t n = 200000;
  for (std::size_t i = 0; i < n; ++i) ++counts[s.sample(rng)];
  for (std::size_t k = 0; k < 4; ++k) {
    const double se = std::sqrt(p[k] * (1 - p[k]) / n);
    CHECK(std::abs(counts[k] / double(n) - p[k]) < 4.5 * se);
  }
}

TEST_CASE("seed mixing separates replicate streams") {
  CHECK(mix_seed(1, 0) != mix_seed(1, 1));
  CHECK(mix_seed(1, 0) != mix_seed(2, 0));
  Rng a(mix_seed(7, 3)), b(mix_seed(7, 3));
  CHECK(a.next() == b.next());
}
