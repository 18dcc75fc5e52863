#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "treepark/errors.hpp"
#include "treepark/experiments.hpp"
#include "treepark/fringe.hpp"
#include "treepark/parking.hpp"
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

RunOptions quick_opts(std::uint64_t seed, int threads = 2) {
  RunOptions o;
  o.master_seed = seed;
  o.threads = threads;
  o.size_cap = 1 << 20;
  return o;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("root-parked estimate brackets the closed form") {
  const EstimateReport r = estimate_root_parked(geometric_poisson(0.325), 50000, quick_opts(11));
  REQUIRE(r.reference.has_value());
  CHECK(*r.reference == doctest::Approx(0.325).epsilon(1e-9));
  REQUIRE(r.z.has_value());
  CHECK(std::abs(*r.z) < 4.5);
  CHECK(r.replicates + r.censored == 50000);
}

TEST_CASE("mean flux at t = 0 is exactly zero") {
  const EstimateReport r = estimate_mean_flux(geometric_poisson(0.5), 0.0, 2000, quick_opts(3));
  CHECK(r.estimate == 0.0);
  CHECK(*r.reference == 0.0);
}

TEST_CASE("mean flux beyond t_max reports a diverged reference") {
  const EstimateReport r = estimate_mean_flux(geometric_poisson(0.5), 0.9, 500, quick_opts(5));
  CHECK(r.reference_diverged);
  CHECK_FALSE(r.reference.has_value());
  CHECK_FALSE(r.z.has_value());
}

TEST_CASE("flux lln: delta_0 arrivals give exactly zero") {
  const Model m(make_offspring(Pmf::geometric_half(40)), uniform_arrivals(Pmf::delta(0), 40));
  const EstimateReport r = estimate_flux_lln(m, 200, 50, quick_opts(7), 1000);
  CHECK(r.estimate == 0.0);
  CHECK(*r.reference == 0.0);
  CHECK_FALSE(r.z.has_value());  // asymptotic reference, no finite-n z-test
}

TEST_CASE("determinism: reports and files identical across worker counts") {
  const Model m = geometric_poisson(0.5);
  const auto dir1 = std::filesystem::temp_directory_path() / "tp_det1";
  const auto dir2 = std::filesystem::temp_directory_path() / "tp_det2";
  std::filesystem::remove_all(dir1);
  std::filesystem::remove_all(dir2);
  RunOptions o1 = quick_opts(99, 1);
  o1.out_dir = dir1;
  o1.dump_trees = 3;
  RunOptions o2 = quick_opts(99, 4);
  o2.out_dir = dir2;
  o2.dump_trees = 3;
  const EstimateReport r1 = estimate_mean_flux(m, 0.6, 20000, o1);
  const EstimateReport r2 = estimate_mean_flux(m, 0.6, 20000, o2);
  CHECK(r1.estimate == r2.estimate);  // bit-identical
  CHECK(r1.std_error == r2.std_error);
  CHECK(r1.censored == r2.censored);
  CHECK(slurp(dir1 / "mean_flux.csv") == slurp(dir2 / "mean_flux.csv"));
  CHECK(slurp(dir1 / "mean_flux_trees.txt") == slurp(dir2 / "mean_flux_trees.txt"));
  CHECK_FALSE(slurp(dir1 / "mean_flux.csv").empty());
  // dumped trees parse back and align with arrivals
  std::ifstream dumps(dir1 / "mean_flux_trees.txt");
  std::string tree_line, arrival_line;
  int pairs = 0;
  while (std::getline(dumps, tree_line) && std::getline(dumps, arrival_line)) {
    const PlaneTree t = PlaneTree::from_line(tree_line);
    CHECK(parse_count_line(arrival_line).size() == t.size());
    ++pairs;
  }
  CHECK(pairs == 3);
  std::filesystem::remove_all(dir1);
  std::filesystem::remove_all(dir2);
}

TEST_CASE("fringe census: partition holds and the binary cherry is exact") {
  const FringeTable t = fringe_census(binary_poisson(0.4), 2000, 1, 6, 60, quick_opts(13));
  CHECK(t.partitions_ok);
  bool found = false;
  for (const auto& row : t.rows) {
    if (row.pattern == std::vector<std::int32_t>{2, 0, 0}) {
      found = true;
      CHECK(row.exact == doctest::Approx(0.25).epsilon(1e-12));
      CHECK(std::abs(row.z) < 4.5);
    }
    CHECK(row.pattern.size() <= 6);
  }
  CHECK(found);
  // leaf pattern at k=0 has exact probability nu_0
  const FringeTable t0 = fringe_census(geometric_poisson(0.325), 2000, 0, 6, 60, quick_opts(17));
  CHECK(t0.partitions_ok);
  for (const auto& row : t0.rows)
    if (row.pattern == std::vector<std::int32_t>{0})
      CHECK(row.exact == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("pattern enumeration counts plane trees by size") {
  // Catalan counts 1, 1, 2, 5, 14 for sizes 1..5 when every degree has mass
  const Pmf nu = Pmf::geometric_half(10);
  const auto pats = enumerate_patterns(nu, 5);
  std::array<int, 6> by_size{};
  for (const auto& p : pats) ++by_size[p.degrees.size()];
  CHECK(by_size[1] == 1);
  CHECK(by_size[2] == 1);
  CHECK(by_size[3] == 2);
  CHECK(by_size[4] == 5);
  CHECK(by_size[5] == 14);
  // packed keys are collision-free across the enumeration
  std::unordered_map<std::uint64_t, int> seen;
  for (const auto& p : pats) CHECK(seen.emplace(pack_degrees(p.degrees), 1).second);
}

TEST_CASE("clusters experiment: no cars, no clusters") {
  const Model m(make_offspring(Pmf::geometric_half(40)), uniform_arrivals(Pmf::delta(0), 40));
  const std::vector<std::size_t> ns{200};
  const auto rows = cluster_experiment(m, ns, 40, quick_opts(19));
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].mean_cmax_over_n == 0.0);
  CHECK(rows[0].frac_c2_le_30logn == 1.0);
}

TEST_CASE("giant estimator rejects subcritical models with cars") {
  CHECK_THROWS_AS(estimate_giant_constant(geometric_poisson(0.325), 20, 5, 100, quick_opts(1)),
                  Error);
}

TEST_CASE("giant estimator: no cars parks nobody") {
  const Model m(make_offspring(Pmf::geometric_half(40)), uniform_arrivals(Pmf::delta(0), 40));
  const EstimateReport r = estimate_giant_constant(m, 10, 2, 500, quick_opts(23));
  CHECK(r.estimate == 0.0);
}

TEST_CASE("giant estimator agrees with materialized spine trees at small K") {
  const Model m = geometric_poisson(0.5);
  const std::size_t K = 4, margin = 1;
  RunOptions opts = quick_opts(29);
  opts.graft_cap = 200000;
  const std::uint64_t reps = 20000;
  const EstimateReport stream = estimate_giant_constant(m, K, margin, reps, opts);

  // independent route: materialize T(K), park it, check the same spine event
  const ModelSamplers s(m);
  Rng rng(777777);
  std::uint64_t ok = 0, done = 0;
  while (done < reps) {
    const auto st = sample_spine_tree(s, K, rng, 1 << 22);
    if (!st) continue;  // censored replicate dropped (rare at this cap)
    ++done;
    std::vector<std::int32_t> arr;
    sample_arrivals_into(st->tree.degrees(), s, rng, arr);
    const ParkingResult pr = park(st->tree, arr);
    bool all = true;
    for (std::size_t i = margin; i <= K; ++i)
      if (!pr.parked[static_cast<std::size_t>(st->spine[i])]) {
        all = false;
        break;
      }
    ok += all;
  }
  const double p2 = static_cast<double>(ok) / static_cast<double>(reps);
  const double se = std::sqrt(stream.std_error * stream.std_error +
                              p2 * (1 - p2) / static_cast<double>(reps));
  CHECK(std::abs(stream.estimate - p2) < 4.0 * se);
}

TEST_CASE("tail experiment: delta_0 arrivals have an empty tail") {
  const Model m(make_offspring(Pmf::geometric_half(40)), uniform_arrivals(Pmf::delta(0), 40));
  const std::vector<std::int64_t> ks{0, 1, 2};
  const TailTable t = tail_experiment(m, 2000, ks, quick_opts(31));
  CHECK(t.rows[0].survival == 1.0);  // phi >= 0 always
  CHECK(t.rows[1].survival == 0.0);
  CHECK(t.rows[2].survival == 0.0);
}

TEST_CASE("tail experiment flags non-subcritical input but still runs") {
  const std::vector<std::int64_t> ks{1, 2};
  const TailTable t = tail_experiment(geometric_poisson(0.5), 2000, ks, quick_opts(37));
  CHECK_FALSE(t.subcritical);
  CHECK_FALSE(t.note.empty());
  CHECK(t.rows.size() == 2);
}
