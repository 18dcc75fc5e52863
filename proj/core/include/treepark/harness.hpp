#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "treepark/model.hpp"

namespace treepark {

/// Point estimate with its sampling error and, when a closed form or an
/// auxiliary estimate exists, a reference value and z-score.
struct EstimateReport {
  std::string name;
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t replicates = 0;
  std::optional<double> reference;
  double reference_se = 0.0;  // nonzero when the reference is itself estimated
  std::optional<double> z;
  std::uint64_t censored = 0;
  bool reference_diverged = false;  // reference is +infinity
  std::string note;

  nlohmann::json to_json() const;
  /// |z| <= band when a z-score exists, otherwise true.
  bool in_band(double band = 4.0) const;
};

struct RunOptions {
  std::uint64_t master_seed = 1;
  int threads = 0;  // 0 = hardware concurrency
  std::size_t size_cap = 10'000'000;
  std::size_t graft_cap = 100'000;  // per-graft cap in the sin-tree estimator
  std::optional<std::filesystem::path> out_dir;
  std::size_t dump_trees = 0;  // dump the first N sampled (tree, arrivals) pairs
  nlohmann::json config_echo;

  int effective_threads() const {
    if (threads > 0) return threads;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
  }
};

namespace detail {

/// Fixed chunk grid: boundaries depend only on the replicate count, so the
/// chunk-ordered reduction is bit-identical for any worker count.
struct ChunkGrid {
  std::uint64_t total;
  std::uint64_t chunk;

  static ChunkGrid make(std::uint64_t total) {
    std::uint64_t chunk = total / 256;
    if (chunk < 1) chunk = 1;
    if (chunk > 65536) chunk = 65536;
    return {total, chunk};
  }
  std::uint64_t count() const { return total == 0 ? 0 : (total + chunk - 1) / chunk; }
  std::pair<std::uint64_t, std::uint64_t> bounds(std::uint64_t i) const {
    const std::uint64_t b = i * chunk;
    return {b, std::min(b + chunk, total)};
  }
};

/// Runs fn(chunk_index, begin, end, acc) across a worker pool; per-chunk
/// accumulators are returned in index order for deterministic reduction.
template <class Acc, class Fn>
std::vector<Acc> run_chunked(const ChunkGrid& grid, int threads, Fn&& fn) {
  const std::uint64_t n_chunks = grid.count();
  std::vector<Acc> accs(n_chunks);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::uint64_t c = next.fetch_add(1);
      if (c >= n_chunks) break;
      const auto [b, e] = grid.bounds(c);
      fn(c, b, e, accs[c]);
    }
  };
  const int pool = std::max(1, threads);
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(pool) - 1);
  for (int i = 1; i < pool; ++i) workers.emplace_back(worker);
  worker();
  for (auto& w : workers) w.join();
  return accs;
}

}  // namespace detail

/// Writes <name>.json (+ echoes config, wall time) and, when rows are
/// provided, <name>.csv under opts.out_dir.
void write_experiment_outputs(const RunOptions& opts, const std::string& name,
                              const nlohmann::json& summary,
                              const std::vector<std::string>& csv_header,
                              const std::string& csv_body);

}  // namespace treepark
