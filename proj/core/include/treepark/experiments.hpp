#pragma once

#include <span>

#include "treepark/harness.hpp"
#include "treepark/model.hpp"

namespace treepark {

/// Frequency of {X_root >= 1} over unconditioned trees.
/// Reference E_nu[m] when Theta >= 0 (Theta < 0 parks strictly less).
EstimateReport estimate_root_parked(const Model& m, std::uint64_t reps, const RunOptions& opts);

/// Mean flux over unconditioned trees with arrivals diluted by t; reference
/// is the closed-form Phi(t), flagged as diverged past t_max.
EstimateReport estimate_mean_flux(const Model& m, double t, std::uint64_t reps,
                                  const RunOptions& opts);

/// Mean of phi(T_n)/n over conditioned trees. Supercritical reference
/// E_nu[m] - p_hat(root parked), with p_hat estimated over
/// root_parked_reps unconditioned trees; sub/critical reference 0 (the flux
/// is o(n); no z-score is attached to the asymptotic reference).
EstimateReport estimate_flux_lln(const Model& m, std::size_t n, std::uint64_t reps,
                                 const RunOptions& opts,
                                 std::uint64_t root_parked_reps = 1'000'000);

struct FringeRow {
  std::vector<std::int32_t> pattern;  // depth-first degree sequence
  double exact = 0.0;                 // n_k(t) * prod_v nu(deg v)
  double empirical = 0.0;             // mean over replicates of count/n
  double std_error = 0.0;
  double z = 0.0;
};

struct FringeTable {
  std::vector<FringeRow> rows;
  double residual_mean = 0.0;  // vertices matching no tracked pattern
  std::uint64_t replicates = 0;
  std::size_t k = 0;
  bool partitions_ok = true;  // per-replicate bucket counts summed to n
};

/// Empirical distribution of H_k(T_n, x) over patterns with at most
/// max_pattern_size vertices and height >= k.
FringeTable fringe_census(const Model& m, std::size_t n, std::size_t k,
                          std::size_t max_pattern_size, std::uint64_t reps,
                          const RunOptions& opts);

struct ClusterRow {
  std::size_t n = 0;
  std::uint64_t replicates = 0;
  double mean_cmax_over_n = 0.0;
  double se_cmax_over_n = 0.0;
  double median_cmax_over_logn = 0.0;
  double mean_c2 = 0.0;
  double frac_c2_le_30logn = 0.0;
  double frac_cmax_le_30logn = 0.0;
};

std::vector<ClusterRow> cluster_experiment(const Model& m, std::span<const std::size_t> n_list,
                                           std::uint64_t reps, const RunOptions& opts);

/// Frequency of {u_0 .. u_{K-margin} all parked} on the sin-tree truncation
/// T(K), estimating the giant-component constant C. Grafted subtree fluxes
/// are capped at K+2 (larger values cannot change any spine status) and a
/// graft censored at graft_cap contributes the cap, which in the
/// supercritical regime is exact up to an exponentially small event.
/// Throws NotSupercritical when Theta >= 0 with a nonzero car density.
EstimateReport estimate_giant_constant(const Model& m, std::size_t K, std::size_t margin,
                                       std::uint64_t reps, const RunOptions& opts);

struct TailRow {
  std::int64_t threshold = 0;
  std::uint64_t hits = 0;
  double survival = 0.0;
};

struct TailTable {
  std::vector<TailRow> rows;
  double slope = 0.0;  // least-squares slope of ln(survival) over thresholds with >= 100 hits
  std::size_t fitted_points = 0;
  std::uint64_t replicates = 0;
  std::uint64_t censored = 0;
  bool subcritical = true;
  std::string note;
};

/// Empirical survival function of the flux over unconditioned trees.
TailTable tail_experiment(const Model& m, std::uint64_t reps,
                          std::span<const std::int64_t> thresholds, const RunOptions& opts);

}  // namespace treepark
