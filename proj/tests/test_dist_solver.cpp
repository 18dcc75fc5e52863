#include <array>
#include <cmath>

#include "doctest.h"
#include "treepark/dist_solver.hpp"
#include "treepark/errors.hpp"
#include "treepark/rng.hpp"
#include "treepark/treegen.hpp"

using namespace treepark;

namespace {

Model geometric_poisson(double alpha, std::size_t k_max = 40) {
  return Model(make_offspring(Pmf::geometric_half(k_max)),
               uniform_arrivals(Pmf::poisson(alpha, 30), k_max));
}

}  // namespace

TEST_CASE("delta_0 arrivals degenerate after one iteration") {
  const Model m(make_offspring(Pmf::geometric_half(40)), uniform_arrivals(Pmf::delta(0), 40));
  const LawResult lr = iterate_law(m, 16, 10, 1e-12);
  CHECK(lr.iterations == 1);
  CHECK(lr.law.pmf[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(lr.law.mass_defect < 1e-14);
  CHECK_THROWS_AS(tail_rate(lr.law, 8), Error);
}

TEST_CASE("subcritical law: p0, mean, flux mean") {
  const Model m = geometric_poisson(0.325);
  const LawResult lr = iterate_law(m, 200, 2000, 1e-12);
  CHECK(std::abs(lr.law.pmf[0] - 0.675) < 1e-8);  // p0 = 1 - E_nu[m]
  CHECK(lr.law.mass_defect < 1e-12);

  const LawResult lr400 = iterate_law(m, 400, 2000, 1e-13);
  CHECK(law_mean(lr400.law) == doctest::Approx(0.4153286).epsilon(1e-6));
  const DistVector flux = flux_law(lr400.law);
  CHECK(law_mean(flux) == doctest::Approx(0.0903286).epsilon(1e-5));
}

TEST_CASE("flux law is an index shift") {
  DistVector d;
  d.pmf = {0.5, 0.3, 0.2};
  d.mass_defect = 0.0;
  const DistVector q = flux_law(d);
  CHECK(q.pmf[0] == doctest::Approx(0.8));
  CHECK(q.pmf[1] == doctest::Approx(0.2));
  CHECK(q.pmf[2] == doctest::Approx(0.0));
}

TEST_CASE("tail rate: subcritical strictly below 1, insufficient support throws") {
  const Model m = geometric_poisson(0.325);
  const LawResult lr = iterate_law(m, 400, 2000, 1e-13);
  const double rho = tail_rate(lr.law, 32);
  CHECK(rho < 1.0 - 1e-3);
  CHECK(rho == doctest::Approx(0.4997).epsilon(0.01));  // radius about 2
  CHECK_THROWS_AS(tail_rate(lr.law, 1000), Error);
}

TEST_CASE("TV contraction and fixed-point consistency") {
  const Model m = geometric_poisson(0.325);
  const LawResult lr = iterate_law(m, 128, 2000, 1e-12);
  for (std::size_t i = 2; i < lr.tv_history.size(); ++i)
    CHECK(lr.tv_history[i] <= lr.tv_history[i - 1] * (1.0 + 1e-9));
  const DistVector pushed = de_step(m, lr.law);
  double tv = 0.0;
  for (std::size_t i = 0; i < pushed.pmf.size(); ++i)
    tv += std::abs(pushed.pmf[i] - lr.law.pmf[i]);
  CHECK(tv * 0.5 < 10.0 * 1e-12);
}

TEST_CASE("(EQ) residual of the converged law") {
  for (const double alpha : {0.325, 0.5}) {
    const Model m = geometric_poisson(alpha);
    const LawResult lr = iterate_law(m, 256, 4000, 1e-12);
    for (const double z : {0.2, 0.5, 0.9}) {
      const double tol = 10.0 * (1e-12 + lr.law.mass_defect);
      CHECK(std::abs(eq_residual(m, lr.law, z)) < std::max(tol, 1e-10));
    }
  }
}

TEST_CASE("supercritical p0 exceeds 1 - E_nu[m]") {
  const Model m = geometric_poisson(0.5);
  const LawResult lr = iterate_law(m, 200, 4000, 1e-10);
  CHECK(lr.law.pmf[0] > 0.5);               // P(parked) < E_nu[m] = 0.5
  CHECK(lr.law.pmf[0] == doctest::Approx(0.5084).epsilon(2e-3));
  CHECK(lr.law.mass_defect > 1e-4);         // real mass escapes to large k
}

TEST_CASE("no convergence reports the last TV distance") {
  const Model m = geometric_poisson(0.325);
  CHECK_THROWS_WITH_AS(iterate_law(m, 64, 3, 1e-13), doctest::Contains("last TV"), Error);
}

TEST_CASE("law matches Monte Carlo on a small run") {
  const Model m = geometric_poisson(0.325);
  const LawResult lr = iterate_law(m, 64, 2000, 1e-12);
  const ModelSamplers s(m);
  Rng rng(20240817);
  const std::size_t reps = 200000;
  std::array<std::uint64_t, 6> counts{};
  std::size_t ok = 0;
  std::vector<std::int32_t> degrees, arrivals;
  std::vector<std::int64_t> stack;
  for (std::size_t i = 0; i < reps; ++i) {
    if (!sample_gw_degrees(s, rng, 1000000, degrees)) continue;
    ++ok;
    sample_arrivals_into(degrees, s, rng, arrivals);
    stack.clear();
    std::int64_t x_root = 0;
    for (std::size_t v = degrees.size(); v-- > 0;) {
      std::int64_t x = arrivals[v];
      for (std::int32_t c = 0; c < degrees[v]; ++c) {
        x += stack.back();
        stack.pop_back();
      }
      if (v == 0) x_root = x;
      stack.push_back(x > 1 ? x - 1 : 0);
    }
    if (x_root < 6) ++counts[static_cast<std::size_t>(x_root)];
  }
  for (std::size_t k = 0; k < 6; ++k) {
    const double emp = static_cast<double>(counts[k]) / static_cast<double>(ok);
    const double se = std::sqrt(lr.law.pmf[k] * (1 - lr.law.pmf[k]) / static_cast<double>(ok));
    CHECK(std::abs(emp - lr.law.pmf[k]) < 4.0 * se);
  }
}
