#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "treepark/model.hpp"
#include "treepark/series.hpp"

namespace treepark {

/// Coefficients of A(1+x) through order D, where A is the generating
/// function of `law` (binomial re-expansion around 1).
TruncatedSeries pgf_shifted(const Pmf& law, std::size_t D);

/// P(X = 0): the closed form 1 - E_nu[m] when Theta >= 0, otherwise the
/// converged value from the distributional solver.
double default_p0(const Model& m);

/// Bivariate expansion of
///   F(x,y) = sum_k nu_k A_k(1+x) ((y + 1 - p0)/(1+x) + p0)^k - y - 1
/// through total order D. W satisfies F(z-1, W(z)-1) = 0.
BivariateSeries f_series(const Model& m, std::size_t D, double p0);
BivariateSeries f_series(const Model& m, std::size_t D);

/// Pointwise evaluation of F and dF/dy from the model laws (independent of
/// the series truncation).
double f_eval(const Model& m, double p0, double x, double y);
double f_eval_dy(const Model& m, double p0, double x, double y);

/// Slopes of the two analytic branches of F(x, y(x)) = 0 at the origin:
/// c_pm = (1 + Sigma^2 E_nu[m] - E_nubar[m] +- sqrt(Theta)) / Sigma^2.
/// Throws NotSubcritical unless Theta > 0.
std::pair<double, double> puiseux_c(const Model& m);

enum class BranchSign { Minus, Plus };

struct PuiseuxBranch {
  std::vector<double> c;  // c[1..D]; c[0] = 0
  BranchSign sign;

  double eval(double x) const {
    double acc = 0.0;
    for (std::size_t k = c.size(); k-- > 1;) acc = (acc + c[k]) * x;
    return acc;
  }
};

/// Branch coefficients by substitution: c_1 = c_-, c_+ per `sign`; each c_k
/// (k >= 2) zeroes the x^{k+1} coefficient of F(x, sum_j c_j x^j). The
/// linear coefficient of c_k equals +-sqrt(Theta); DegenerateStep if it
/// vanishes numerically.
PuiseuxBranch puiseux_branch(const Model& m, BranchSign sign, std::size_t D);

/// Safeguarded Newton iteration on y -> F(x, y) from y_seed, to residual
/// 1e-12. Throws NewtonDiverged.
double newton_continue(const Model& m, double x, double y_seed, double p0);
double newton_continue(const Model& m, double x, double y_seed);

/// Coefficients of W around z = 0 through order D by formal fixed-point
/// iteration of (EQ), with the constant coefficient pinned to p0.
TruncatedSeries w_series(const Model& m, std::size_t D, double p0,
                         std::size_t max_iters = 200000, double tol = 1e-14);
TruncatedSeries w_series(const Model& m, std::size_t D);

/// Geometric-mean consecutive-coefficient ratio over the trailing window;
/// estimates 1/R for a series with radius R.
double coeff_ratio(const TruncatedSeries& s, std::size_t window);

}  // namespace treepark
