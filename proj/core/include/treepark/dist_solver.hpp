#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "treepark/model.hpp"

namespace treepark {

/// Truncated law of X, the number of cars visiting the root of the
/// unconditioned tree. Entries 0..N are exact for the represented iterate
/// (convolutions over nonnegative supports are lower-triangular, so
/// truncation only sheds mass beyond N into mass_defect).
struct DistVector {
  std::vector<double> pmf;   // p_0 .. p_N
  double mass_defect = 0.0;  // 1 - sum(pmf)

  std::size_t order() const { return pmf.size() - 1; }
};

struct LawResult {
  DistVector law;
  std::size_t iterations = 0;
  double last_tv = 0.0;
  std::vector<double> tv_history;  // TV distance after each iteration
};

/// One application of the (DE) map to a truncated law.
DistVector de_step(const Model& m, const DistVector& dist);

/// Fixed-point iteration of the recursive distributional equation
/// X = sum_{i<=N} (X_i - 1)_+ + P_N starting from X == 0. The m-th iterate
/// is the law of X on the tree truncated at height m. Stops when successive
/// pmfs differ by less than tol in total variation; throws NoConvergence
/// with the last TV distance otherwise.
LawResult iterate_law(const Model& m, std::size_t N, std::size_t max_iters, double tol);

/// Law of (X-1)_+: q_0 = p_0 + p_1, q_k = p_{k+1}.
DistVector flux_law(const DistVector& dist);

/// Geometric tail rate rho = lim p_{k+1}/p_k, estimated as the geometric
/// mean of consecutive ratios over the last `window` indices. Requires the
/// pmf to be strictly positive (above the underflow floor) there.
double tail_rate(const DistVector& dist, std::size_t window);

double law_mean(const DistVector& dist);

/// W(z) = sum_k p_k z^k evaluated on the truncated law.
double law_pgf(const DistVector& dist, double z);

/// Residual of the generating-function equation (EQ) at z, using p0 from the
/// law itself: W(z) - sum_k nu_k A_k(z) ((W(z) - p0)/z + p0)^k.
double eq_residual(const Model& m, const DistVector& dist, double z);

}  // namespace treepark
