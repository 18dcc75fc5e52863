#include "treepark/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "treepark/errors.hpp"
#include "treepark/fringe.hpp"
#include "treepark/io.hpp"
#include "treepark/parking.hpp"
#include "treepark/rng.hpp"
#include "treepark/treegen.hpp"

namespace treepark {

namespace {

using detail::ChunkGrid;
using detail::run_chunked;

struct TreeScratch {
  std::vector<std::int32_t> degrees;
  std::vector<std::int32_t> arrivals;
  std::vector<std::int64_t> stack;
};

std::optional<double> zscore(double est, double se, double ref, double ref_se) {
  const double denom = std::sqrt(se * se + ref_se * ref_se);
  if (denom == 0.0) return est == ref ? std::optional<double>(0.0) : std::nullopt;
  return (est - ref) / denom;
}

std::string dump_pair(std::span<const std::int32_t> degrees,
                      std::span<const std::int32_t> arrivals) {
  std::string s = format_count_line(degrees);
  s += "\n";
  s += format_count_line(arrivals);
  s += "\n";
  return s;
}

void write_dumps(const RunOptions& opts, const std::string& name,
                 const std::vector<std::string>& chunks) {
  if (!opts.out_dir || opts.dump_trees == 0) return;
  std::string all;
  for (const auto& c : chunks) all += c;
  if (all.empty()) return;
  CsvWriter w(*opts.out_dir / (name + "_trees.txt"), {});
  w.raw(all);
  w.close();
}

nlohmann::json base_summary(const RunOptions& opts, const Model& m, double wall_seconds) {
  nlohmann::json j;
  j["config"] = opts.config_echo.is_null() ? nlohmann::json::object() : opts.config_echo;
  j["seed"] = opts.master_seed;
  j["theta"] = m.moments().theta;
  j["wall_time_s"] = wall_seconds;
  return j;
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

/// Exact conditioned degree sequence into scratch.degrees (rejection on the
/// degree total, then the cycle-lemma rotation).
void conditioned_degrees(const ModelSamplers& s, std::size_t n, Rng& rng,
                         std::vector<std::int32_t>& degrees) {
  degrees.resize(n);
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
  std::rotate(degrees.begin(), degrees.begin() + static_cast<std::ptrdiff_t>(r),
              degrees.end());
}

}  // namespace

EstimateReport estimate_root_parked(const Model& m, std::uint64_t reps,
                                    const RunOptions& opts) {
  Timer timer;
  const ModelSamplers samplers(m);
  struct Acc {
    std::uint64_t parked = 0, censored = 0;
    std::string csv, dumps;
  };
  const ChunkGrid grid = ChunkGrid::make(reps);
  const bool want_csv = opts.out_dir.has_value();
  auto accs = run_chunked<Acc>(grid, opts.effective_threads(), [&](std::uint64_t, std::uint64_t b,
                                                                   std::uint64_t e, Acc& acc) {
    TreeScratch sc;
    for (std::uint64_t rep = b; rep < e; ++rep) {
      Rng rng(mix_seed(opts.master_seed, rep));
      bool parked = false, censored = false;
      if (!sample_gw_degrees(samplers, rng, opts.size_cap, sc.degrees)) {
        censored = true;
        ++acc.censored;
      } else {
        sample_arrivals_into(sc.degrees, samplers, rng, sc.arrivals);
        // root parked <=> X_root >= 1
        sc.stack.clear();
        std::int64_t x_root = 0;
        for (std::size_t i = sc.degrees.size(); i-- > 0;) {
          std::int64_t x = sc.arrivals[i];
          for (std::int32_t c = 0; c < sc.degrees[i]; ++c) {
            x += sc.stack.back();
            sc.stack.pop_back();
          }
          if (i == 0) x_root = x;
          sc.stack.push_back(x > 1 ? x - 1 : 0);
        }
        parked = x_root >= 1;
        if (parked) ++acc.parked;
      }
      if (want_csv) {
        acc.csv += std::to_string(rep);
        acc.csv += parked ? ",1," : ",0,";
        acc.csv += censored ? '1' : '0';
        acc.csv += ",";
        acc.csv += std::to_string(censored ? 0 : sc.degrees.size());
        acc.csv += "\r\n";
      }
      if (rep < opts.dump_trees && !censored) acc.dumps += dump_pair(sc.degrees, sc.arrivals);
    }
  });

  EstimateReport r;
  r.name = "root_parked";
  std::uint64_t parked = 0, censored = 0;
  std::string csv, dumps;
  std::vector<std::string> dump_blocks;
  for (auto& a : accs) {
    parked += a.parked;
    censored += a.censored;
    csv += a.csv;
    dump_blocks.push_back(std::move(a.dumps));
  }
  const std::uint64_t completed = reps - censored;
  const double p = completed ? static_cast<double>(parked) / completed : 0.0;
  r.estimate = p;
  r.std_error = completed ? std::sqrt(p * (1.0 - p) / completed) : 0.0;
  r.replicates = completed;
  r.censored = censored;
  if (m.moments().theta >= 0.0) {
    r.reference = m.moments().e_m;
    r.z = zscore(r.estimate, r.std_error, *r.reference, 0.0);
  } else {
    r.note = "supercritical: P(root parked) < E_nu[m]";
  }
  nlohmann::json j = base_summary(opts, m, timer.seconds());
  j["report"] = r.to_json();
  write_experiment_outputs(opts, "root_parked", j, {"replicate", "parked", "censored", "n"},
                           csv);
  write_dumps(opts, "root_parked", dump_blocks);
  return r;
}

EstimateReport estimate_mean_flux(const Model& m, double t, std::uint64_t reps,
                                  const RunOptions& opts) {
  Timer timer;
  const Model diluted = dilute(m, t);
  const ModelSamplers samplers(diluted);
  struct Acc {
    std::int64_t flux_sum = 0;
    double flux_sq = 0.0;
    std::uint64_t censored = 0;
    std::string csv, dumps;
  };
  const ChunkGrid grid = ChunkGrid::make(reps);
  const bool want_csv = opts.out_dir.has_value();
  auto accs = run_chunked<Acc>(grid, opts.effective_threads(), [&](std::uint64_t, std::uint64_t b,
                                                                   std::uint64_t e, Acc& acc) {
    TreeScratch sc;
    for (std::uint64_t rep = b; rep < e; ++rep) {
      Rng rng(mix_seed(opts.master_seed, rep));
      std::int64_t flux = -1;
      if (!sample_gw_degrees(samplers, rng, opts.size_cap, sc.degrees)) {
        ++acc.censored;
      } else {
        sample_arrivals_into(sc.degrees, samplers, rng, sc.arrivals);
        flux = park_flux(sc.degrees, sc.arrivals, sc.stack);
        acc.flux_sum += flux;
        acc.flux_sq += static_cast<double>(flux) * static_cast<double>(flux);
      }
      if (want_csv) {
        acc.csv += std::to_string(rep);
        acc.csv += ',';
        acc.csv += std::to_string(flux);
        acc.csv += flux < 0 ? ",1\r\n" : ",0\r\n";
      }
      if (rep < opts.dump_trees && flux >= 0) acc.dumps += dump_pair(sc.degrees, sc.arrivals);
    }
  });

  EstimateReport r;
  r.name = "mean_flux";
  std::int64_t flux_sum = 0;
  double flux_sq = 0.0;
  std::uint64_t censored = 0;
  std::string csv;
  std::vector<std::string> dump_blocks;
  for (auto& a : accs) {
    flux_sum += a.flux_sum;
    flux_sq += a.flux_sq;
    censored += a.censored;
    csv += a.csv;
    dump_blocks.push_back(std::move(a.dumps));
  }
  const std::uint64_t completed = reps - censored;
  const double mean = completed ? static_cast<double>(flux_sum) / completed : 0.0;
  const double var = completed ? std::max(0.0, flux_sq / completed - mean * mean) : 0.0;
  r.estimate = mean;
  r.std_error = completed ? std::sqrt(var / completed) : 0.0;
  r.replicates = completed;
  r.censored = censored;
  const double ref = mean_flux_curve(m, t);
  if (std::isfinite(ref)) {
    r.reference = ref;
    r.z = zscore(mean, r.std_error, ref, 0.0);
  } else {
    r.reference_diverged = true;
    r.note = "t beyond t_max: mean flux diverges";
  }
  nlohmann::json j = base_summary(opts, m, timer.seconds());
  j["t"] = t;
  j["report"] = r.to_json();
  write_experiment_outputs(opts, "mean_flux", j, {"replicate", "flux", "censored"}, csv);
  write_dumps(opts, "mean_flux", dump_blocks);
  return r;
}

EstimateReport estimate_flux_lln(const Model& m, std::size_t n, std::uint64_t reps,
                                 const RunOptions& opts, std::uint64_t root_parked_reps) {
  Timer timer;
  if (!conditioned_size_reachable(m, n))
    throw Error(Errc::UnreachableSize, "P(|T| = " + std::to_string(n) + ") = 0");
  const ModelSamplers samplers(m);
  struct Acc {
    double sum = 0.0, sq = 0.0;
    std::string csv, dumps;
  };
  const ChunkGrid grid = ChunkGrid::make(reps);
  const bool want_csv = opts.out_dir.has_value();
  auto accs = run_chunked<Acc>(grid, opts.effective_threads(), [&](std::uint64_t, std::uint64_t b,
                                                                   std::uint64_t e, Acc& acc) {
    TreeScratch sc;
    for (std::uint64_t rep = b; rep < e; ++rep) {
      Rng rng(mix_seed(opts.master_seed, rep));
      conditioned_degrees(samplers, n, rng, sc.degrees);
      sample_arrivals_into(sc.degrees, samplers, rng, sc.arrivals);
      const std::int64_t flux = park_flux(sc.degrees, sc.arrivals, sc.stack);
      const double v = static_cast<double>(flux) / static_cast<double>(n);
      acc.sum += v;
      acc.sq += v * v;
      if (want_csv) {
        acc.csv += std::to_string(rep);
        acc.csv += ',';
        acc.csv += std::to_string(flux);
        acc.csv += "\r\n";
      }
      if (rep < opts.dump_trees) acc.dumps += dump_pair(sc.degrees, sc.arrivals);
    }
  });

  EstimateReport r;
  r.name = "flux_lln";
  double sum = 0.0, sq = 0.0;
  std::string csv;
  std::vector<std::string> dump_blocks;
  for (auto& a : accs) {
    sum += a.sum;
    sq += a.sq;
    csv += a.csv;
    dump_blocks.push_back(std::move(a.dumps));
  }
  const double mean = reps ? sum / reps : 0.0;
  const double var = reps ? std::max(0.0, sq / reps - mean * mean) : 0.0;
  r.estimate = mean;
  r.std_error = reps ? std::sqrt(var / reps) : 0.0;
  r.replicates = reps;
  const Regime regime = classify(m);
  if (regime.phase == Phase::Supercritical) {
    RunOptions sub = opts;
    sub.master_seed = splitmix64(opts.master_seed ^ 0x524F4F54504152ull);
    sub.out_dir.reset();
    sub.dump_trees = 0;
    const EstimateReport rp = estimate_root_parked(m, root_parked_reps, sub);
    r.reference = m.moments().e_m - rp.estimate;
    r.reference_se = rp.std_error;
    r.z = zscore(mean, r.std_error, *r.reference, r.reference_se);
  } else {
    // phi(T_n) is o(n): the asymptotic reference is 0, with no finite-n
    // z-test attached
    r.reference = 0.0;
    r.note = "sub/critical flux is o(n); no z-score for the asymptotic reference";
  }
  nlohmann::json j = base_summary(opts, m, timer.seconds());
  j["n"] = n;
  j["report"] = r.to_json();
  write_experiment_outputs(opts, "flux_lln", j, {"replicate", "flux"}, csv);
  write_dumps(opts, "flux_lln", dump_blocks);
  return r;
}

FringeTable fringe_census(const Model& m, std::size_t n, std::size_t k,
                          std::size_t max_pattern_size, std::uint64_t reps,
                          const RunOptions& opts) {
  Timer timer;
  if (!conditioned_size_reachable(m, n))
    throw Error(Errc::UnreachableSize, "P(|T| = " + std::to_string(n) + ") = 0");
  const ModelSamplers samplers(m);
  const PatternIndex index(m.offspring().law, max_pattern_size, k);
  const std::size_t np = index.patterns().size();
  struct Acc {
    std::vector<double> freq_sum, freq_sq;
    double residual = 0.0;
    bool partitions_ok = true;
    std::string dumps;
  };
  const ChunkGrid grid = ChunkGrid::make(reps);
  auto accs = run_chunked<Acc>(grid, opts.effective_threads(), [&](std::uint64_t, std::uint64_t b,
                                                                   std::uint64_t e, Acc& acc) {
    acc.freq_sum.assign(np, 0.0);
    acc.freq_sq.assign(np, 0.0);
    TreeScratch sc;
    std::vector<std::int32_t> parent(n), sizes(n);
    std::vector<std::int32_t> open;
    std::vector<std::int64_t> counts(np);
    for (std::uint64_t rep = b; rep < e; ++rep) {
      Rng rng(mix_seed(opts.master_seed, rep));
      conditioned_degrees(samplers, n, rng, sc.degrees);
      // parents and subtree sizes on the flat arrays
      open.clear();
      for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) {
          while (sc.degrees[open.back()] == 0) open.pop_back();
          parent[i] = open.back();
          --sc.degrees[open.back()];
        } else {
          parent[0] = -1;
        }
        open.push_back(static_cast<std::int32_t>(i));
        sizes[i] = 1;
      }
      // degrees were consumed in place; rebuild them from parents
      for (std::size_t i = 0; i < n; ++i) sc.degrees[i] = 0;
      for (std::size_t i = 1; i < n; ++i) ++sc.degrees[parent[i]];
      for (std::size_t i = n; i-- > 1;) sizes[parent[i]] += sizes[i];
      std::fill(counts.begin(), counts.end(), std::int64_t{0});
      std::int64_t residual = 0;
      for (std::size_t x = 0; x < n; ++x) {
        std::int64_t y = static_cast<std::int64_t>(x);
        for (std::size_t a = 0; a < k && y >= 0; ++a) y = parent[y];
        if (y < 0) {
          ++residual;  // no k-th ancestor
          continue;
        }
        const std::size_t ys = static_cast<std::size_t>(sizes[y]);
        std::int32_t idx = -1;
        if (ys <= max_pattern_size)
          idx = index.find(std::span<const std::int32_t>(sc.degrees.data() + y, ys));
        if (idx >= 0)
          ++counts[idx];
        else
          ++residual;
      }
      std::int64_t total = residual;
      for (std::size_t i = 0; i < np; ++i) total += counts[i];
      if (total != static_cast<std::int64_t>(n)) acc.partitions_ok = false;
      for (std::size_t i = 0; i < np; ++i) {
        const double f = static_cast<double>(counts[i]) / static_cast<double>(n);
        acc.freq_sum[i] += f;
        acc.freq_sq[i] += f * f;
      }
      acc.residual += static_cast<double>(residual) / static_cast<double>(n);
      if (rep < opts.dump_trees) {
        sample_arrivals_into(sc.degrees, samplers, rng, sc.arrivals);
        acc.dumps += dump_pair(sc.degrees, sc.arrivals);
      }
    }
  });

  FringeTable table;
  table.k = k;
  table.replicates = reps;
  std::vector<double> fsum(np, 0.0), fsq(np, 0.0);
  double residual = 0.0;
  std::vector<std::string> dump_blocks;
  for (auto& a : accs) {
    for (std::size_t i = 0; i < np; ++i) {
      fsum[i] += a.freq_sum[i];
      fsq[i] += a.freq_sq[i];
    }
    residual += a.residual;
    table.partitions_ok = table.partitions_ok && a.partitions_ok;
    dump_blocks.push_back(std::move(a.dumps));
  }
  table.residual_mean = reps ? residual / reps : 0.0;
  std::string csv;
  for (std::size_t i = 0; i < np; ++i) {
    const auto& p = index.patterns()[i];
    FringeRow row;
    row.pattern = p.degrees;
    row.exact = (static_cast<std::size_t>(p.height) >= k && k < p.depth_counts.size()
                     ? p.depth_counts[k]
                     : 0) *
                p.gw_weight;
    row.empirical = reps ? fsum[i] / reps : 0.0;
    const double var = reps ? std::max(0.0, fsq[i] / reps - row.empirical * row.empirical) : 0.0;
    row.std_error = reps ? std::sqrt(var / reps) : 0.0;
    if (row.std_error > 0.0)
      row.z = (row.empirical - row.exact) / row.std_error;
    else
      row.z = row.empirical == row.exact ? 0.0 : std::numeric_limits<double>::infinity();
    csv += format_count_line(row.pattern);
    csv += ',' + format_double(row.exact) + ',' + format_double(row.empirical) + ',' +
           format_double(row.std_error) + ',' + format_double(row.z) + "\r\n";
    table.rows.push_back(std::move(row));
  }
  nlohmann::json j = base_summary(opts, m, timer.seconds());
  j["n"] = n;
  j["k"] = k;
  j["max_pattern_size"] = max_pattern_size;
  j["replicates"] = reps;
  j["residual_mean"] = table.residual_mean;
  j["partitions_ok"] = table.partitions_ok;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows)
    rows.push_back({{"pattern", format_count_line(row.pattern)},
                    {"exact", row.exact},
                    {"empirical", row.empirical},
                    {"std_error", row.std_error},
                    {"z", row.z}});
  j["patterns"] = rows;
  write_experiment_outputs(opts, "fringe",
                           j, {"pattern", "exact", "empirical", "std_error", "z"}, csv);
  write_dumps(opts, "fringe", dump_blocks);
  return table;
}

std::vector<ClusterRow> cluster_experiment(const Model& m, std::span<const std::size_t> n_list,
                                           std::uint64_t reps, const RunOptions& opts) {
  Timer timer;
  const ModelSamplers samplers(m);
  std::vector<ClusterRow> rows;
  std::string csv;
  std::vector<std::string> dump_blocks;
  for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
    const std::size_t n = n_list[ni];
    if (!conditioned_size_reachable(m, n))
      throw Error(Errc::UnreachableSize, "P(|T| = " + std::to_string(n) + ") = 0");
    struct Acc {
      std::vector<std::int64_t> cmax, c2;
      std::string csv, dumps;
    };
    const ChunkGrid grid = ChunkGrid::make(reps);
    const bool want_csv = opts.out_dir.has_value();
    auto accs = run_chunked<Acc>(
        grid, opts.effective_threads(),
        [&](std::uint64_t, std::uint64_t b, std::uint64_t e, Acc& acc) {
          TreeScratch sc;
          for (std::uint64_t rep = b; rep < e; ++rep) {
            // the stream is salted by n so the n-runs are independent
            Rng rng(mix_seed(opts.master_seed ^ (0x9E37ull * n), rep));
            conditioned_degrees(samplers, n, rng, sc.degrees);
            sample_arrivals_into(sc.degrees, samplers, rng, sc.arrivals);
            PlaneTree tree = PlaneTree::from_degrees(sc.degrees);
            const ParkingResult pr = park(tree, sc.arrivals);
            const ClusterStats cs = clusters(tree, pr.parked);
            acc.cmax.push_back(cs.c_max);
            acc.c2.push_back(cs.c_2);
            if (want_csv) {
              std::int64_t parked = 0;
              for (auto f : pr.parked) parked += f;
              acc.csv += std::to_string(rep) + ',' + std::to_string(n) + ',' +
                         std::to_string(cs.c_max) + ',' + std::to_string(cs.c_2) + ',' +
                         std::to_string(parked) + "\r\n";
            }
            if (rep < opts.dump_trees) acc.dumps += dump_pair(sc.degrees, sc.arrivals);
          }
        });
    std::vector<double> cmax, c2;
    for (auto& a : accs) {
      for (auto v : a.cmax) cmax.push_back(static_cast<double>(v));
      for (auto v : a.c2) c2.push_back(static_cast<double>(v));
      csv += a.csv;
      dump_blocks.push_back(std::move(a.dumps));
    }
    ClusterRow row;
    row.n = n;
    row.replicates = reps;
    const double nn = static_cast<double>(n);
    const double logn = std::log(nn);
    double s = 0.0, sq = 0.0, c2sum = 0.0;
    std::uint64_t ok_c2 = 0, ok_cmax = 0;
    for (std::size_t i = 0; i < cmax.size(); ++i) {
      const double v = cmax[i] / nn;
      s += v;
      sq += v * v;
      c2sum += c2[i];
      if (c2[i] <= 30.0 * logn) ++ok_c2;
      if (cmax[i] <= 30.0 * logn) ++ok_cmax;
    }
    const double cnt = static_cast<double>(cmax.size());
    row.mean_cmax_over_n = s / cnt;
    row.se_cmax_over_n = std::sqrt(std::max(0.0, sq / cnt - row.mean_cmax_over_n *
                                                               row.mean_cmax_over_n) /
                                   cnt);
    std::vector<double> med = cmax;
    std::nth_element(med.begin(), med.begin() + med.size() / 2, med.end());
    row.median_cmax_over_logn = med[med.size() / 2] / logn;
    row.mean_c2 = c2sum / cnt;
    row.frac_c2_le_30logn = static_cast<double>(ok_c2) / cnt;
    row.frac_cmax_le_30logn = static_cast<double>(ok_cmax) / cnt;
    rows.push_back(row);
  }
  nlohmann::json j = base_summary(opts, m, timer.seconds());
  nlohmann::json jr = nlohmann::json::array();
  for (const auto& row : rows)
    jr.push_back({{"n", row.n},
                  {"replicates", row.replicates},
                  {"mean_cmax_over_n", row.mean_cmax_over_n},
                  {"se_cmax_over_n", row.se_cmax_over_n},
                  {"median_cmax_over_logn", row.median_cmax_over_logn},
                  {"mean_c2", row.mean_c2},
                  {"frac_c2_le_30logn", row.frac_c2_le_30logn},
                  {"frac_cmax_le_30logn", row.frac_cmax_le_30logn}});
  j["rows"] = jr;
  write_experiment_outputs(opts, "clusters", j,
                           {"replicate", "n", "c_max", "c_2", "parked"}, csv);
  write_dumps(opts, "clusters", dump_blocks);
  return rows;
}

EstimateReport estimate_giant_constant(const Model& m, std::size_t K, std::size_t margin,
                                       std::uint64_t reps, const RunOptions& opts) {
  Timer timer;
  if (K < 1 || margin >= K)
    throw Error(Errc::ConfigError, "need K >= 1 and margin < K");
  if (m.moments().theta >= 0.0 && m.moments().e_m > 0.0)
    throw Error(Errc::NotSupercritical,
                "Theta = " + std::to_string(m.moments().theta) + " >= 0");
  const ModelSamplers samplers(m);
  const std::int64_t cap = static_cast<std::int64_t>(K) + 2;
  struct Acc {
    std::uint64_t all_parked = 0, capped_grafts = 0;
    std::string csv;
  };
  const ChunkGrid grid = ChunkGrid::make(reps);
  const bool want_csv = opts.out_dir.has_value();
  auto accs = run_chunked<Acc>(grid, opts.effective_threads(), [&](std::uint64_t, std::uint64_t b,
                                                                   std::uint64_t e, Acc& acc) {
    TreeScratch sc;
    for (std::uint64_t rep = b; rep < e; ++rep) {
      Rng rng(mix_seed(opts.master_seed, rep));
      std::uint64_t capped = 0;
      auto graft_flux = [&]() -> std::int64_t {
        if (!sample_gw_degrees(samplers, rng, opts.graft_cap, sc.degrees)) {
          // censored graft: in the supercritical regime its flux exceeds the
          // cap up to an exponentially small event
          ++capped;
          return cap;
        }
        sample_arrivals_into(sc.degrees, samplers, rng, sc.arrivals);
        return std::min(park_flux(sc.degrees, sc.arrivals, sc.stack), cap);
      };
      bool all = true;
      std::int64_t x = 0;
      for (std::size_t lvl = K + 1; lvl-- > margin;) {
        std::uint32_t deg;
        std::uint32_t grafts;
        if (lvl == K) {
          deg = samplers.sample_offspring(rng);
          grafts = deg;
        } else {
          deg = samplers.sample_sb_offspring(rng);
          grafts = deg - 1;
        }
        std::int64_t tot = samplers.sample_arrival(deg, rng);
        for (std::uint32_t g = 0; g < grafts; ++g) tot += graft_flux();
        if (lvl < K) tot += x > 1 ? x - 1 : 0;
        x = std::min(tot, cap);
        if (x < 1) {
          all = false;
          break;
        }
      }
      if (all) ++acc.all_parked;
      acc.capped_grafts += capped;
      if (want_csv)
        acc.csv += std::to_string(rep) + (all ? ",1," : ",0,") + std::to_string(capped) +
                   "\r\n";
    }
  });
  EstimateReport r;
  r.name = "giant_K" + std::to_string(K);
  std::uint64_t ok = 0, capped = 0;
  std::string csv;
  for (auto& a : accs) {
    ok += a.all_parked;
    capped += a.capped_grafts;
    csv += a.csv;
  }
  const double p = reps ? static_cast<double>(ok) / reps : 0.0;
  r.estimate = p;
  r.std_error = reps ? std::sqrt(p * (1.0 - p) / reps) : 0.0;
  r.replicates = reps;
  r.note = "capped grafts: " + std::to_string(capped);
  nlohmann::json j = base_summary(opts, m, timer.seconds());
  j["K"] = K;
  j["margin"] = margin;
  j["capped_grafts"] = capped;
  j["report"] = r.to_json();
  write_experiment_outputs(opts, r.name, j, {"replicate", "all_parked", "capped_grafts"},
                           csv);
  return r;
}

TailTable tail_experiment(const Model& m, std::uint64_t reps,
                          std::span<const std::int64_t> thresholds, const RunOptions& opts) {
  Timer timer;
  const ModelSamplers samplers(m);
  std::vector<std::int64_t> ks(thresholds.begin(), thresholds.end());
  std::sort(ks.begin(), ks.end());
  struct Acc {
    std::vector<std::uint64_t> hits;
    std::uint64_t censored = 0;
    std::string csv, dumps;
  };
  const ChunkGrid grid = ChunkGrid::make(reps);
  const bool want_csv = opts.out_dir.has_value();
  auto accs = run_chunked<Acc>(grid, opts.effective_threads(), [&](std::uint64_t, std::uint64_t b,
                                                                   std::uint64_t e, Acc& acc) {
    acc.hits.assign(ks.size(), 0);
    TreeScratch sc;
    for (std::uint64_t rep = b; rep < e; ++rep) {
      Rng rng(mix_seed(opts.master_seed, rep));
      std::int64_t flux = -1;
      if (!sample_gw_degrees(samplers, rng, opts.size_cap, sc.degrees)) {
        ++acc.censored;
      } else {
        sample_arrivals_into(sc.degrees, samplers, rng, sc.arrivals);
        flux = park_flux(sc.degrees, sc.arrivals, sc.stack);
        for (std::size_t i = 0; i < ks.size() && flux >= ks[i]; ++i) ++acc.hits[i];
      }
      if (want_csv)
        acc.csv += std::to_string(rep) + ',' + std::to_string(flux) +
                   (flux < 0 ? ",1\r\n" : ",0\r\n");
      if (rep < opts.dump_trees && flux >= 0) acc.dumps += dump_pair(sc.degrees, sc.arrivals);
    }
  });
  TailTable table;
  table.replicates = reps;
  std::vector<std::uint64_t> hits(ks.size(), 0);
  std::string csv;
  std::vector<std::string> dump_blocks;
  for (auto& a : accs) {
    for (std::size_t i = 0; i < ks.size(); ++i) hits[i] += a.hits[i];
    table.censored += a.censored;
    csv += a.csv;
    dump_blocks.push_back(std::move(a.dumps));
  }
  const std::uint64_t completed = reps - table.censored;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    TailRow row;
    row.threshold = ks[i];
    row.hits = hits[i];
    row.survival = completed ? static_cast<double>(hits[i]) / completed : 0.0;
    table.rows.push_back(row);
  }
  // least-squares slope of ln(survival) over thresholds with >= 100 hits
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t cnt = 0;
  for (const auto& row : table.rows) {
    if (row.hits < 100) continue;
    const double x = static_cast<double>(row.threshold);
    const double y = std::log(row.survival);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }
  table.fitted_points = cnt;
  table.slope = cnt >= 2 ? (sxy - sx * sy / cnt) / (sxx - sx * sx / cnt) : 0.0;
  const Regime regime = classify(m);
  table.subcritical = regime.phase == Phase::Subcritical;
  if (!table.subcritical)
    table.note = "model is not subcritical: the flux tail is not expected to be geometric";
  nlohmann::json j = base_summary(opts, m, timer.seconds());
  j["replicates"] = reps;
  j["censored"] = table.censored;
  j["slope"] = table.slope;
  j["fitted_points"] = table.fitted_points;
  j["subcritical"] = table.subcritical;
  if (!table.note.empty()) j["note"] = table.note;
  nlohmann::json jr = nlohmann::json::array();
  for (const auto& row : table.rows)
    jr.push_back(
        {{"threshold", row.threshold}, {"hits", row.hits}, {"survival", row.survival}});
  j["survival"] = jr;
  write_experiment_outputs(opts, "tails", j, {"replicate", "flux", "censored"}, csv);
  write_dumps(opts, "tails", dump_blocks);
  return table;
}

}  // namespace treepark
