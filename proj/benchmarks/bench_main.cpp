#include <benchmark/benchmark.h>

#include "treepark/dist_solver.hpp"
#include "treepark/parking.hpp"
#include "treepark/puiseux.hpp"
#include "treepark/rng.hpp"
#include "treepark/treegen.hpp"

namespace {

using namespace treepark;

Model geometric_poisson(double alpha) {
  return Model(make_offspring(Pmf::geometric_half(40)),
               uniform_arrivals(Pmf::poisson(alpha, 30), 40));
}

void BM_ParkMillionVertices(benchmark::State& state) {
  const Model m = geometric_poisson(0.5);
  const ModelSamplers s(m);
  Rng rng(1);
  std::vector<std::int32_t> degrees, arrivals;
  while (!sample_gw_degrees(s, rng, 8 << 20, degrees) || degrees.size() < 1000000) {
  }
  sample_arrivals_into(degrees, s, rng, arrivals);
  std::vector<std::int64_t> stack;
  for (auto _ : state) {
    benchmark::DoNotOptimize(park_flux(degrees, arrivals, stack));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(degrees.size()));
}
BENCHMARK(BM_ParkMillionVertices)->Unit(benchmark::kMillisecond);

void BM_SampleGw(benchmark::State& state) {
  const Model m = geometric_poisson(0.5);
  const ModelSamplers s(m);
  Rng rng(2);
  std::vector<std::int32_t> degrees;
  std::int64_t vertices = 0;
  for (auto _ : state) {
    if (sample_gw_degrees(s, rng, 1 << 20, degrees))
      vertices += static_cast<std::int64_t>(degrees.size());
  }
  state.SetItemsProcessed(vertices);
}
BENCHMARK(BM_SampleGw);

void BM_SampleConditioned(benchmark::State& state) {
  const Model m = geometric_poisson(0.5);
  const ModelSamplers sams(m);
  Rng rng(3);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_gw_conditioned(sams, m, n, rng).size());
  }
}
BENCHMARK(BM_SampleConditioned)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_IterateLawStep(benchmark::State& state) {
  const Model m = geometric_poisson(0.325);
  DistVector law;
  law.pmf.assign(401, 0.0);
  law.pmf[0] = 1.0;
  for (int i = 0; i < 8; ++i) law = de_step(m, law);
  for (auto _ : state) {
    benchmark::DoNotOptimize(de_step(m, law).pmf[0]);
  }
}
BENCHMARK(BM_IterateLawStep)->Unit(benchmark::kMillisecond);

void BM_FSeries(benchmark::State& state) {
  const Model m = geometric_poisson(0.325);
  for (auto _ : state) {
    benchmark::DoNotOptimize(f_series(m, 9, 0.675).coeff(2, 0));
  }
}
BENCHMARK(BM_FSeries)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
