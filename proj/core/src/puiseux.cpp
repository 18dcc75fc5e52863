#include "treepark/puiseux.hpp"

#include <cmath>

#include "treepark/dist_solver.hpp"
#include "treepark/errors.hpp"

namespace treepark {

TruncatedSeries pgf_shifted(const Pmf& law, std::size_t D) {
  // [x^d] A(1+x) = sum_i law_i C(i,d)
  std::vector<double> c(D + 1, 0.0);
  for (std::size_t i = 0; i < law.support(); ++i) {
    const double w = law[i];
    if (w == 0.0) continue;
    double binom = 1.0;  // C(i,0)
    for (std::size_t d = 0; d <= D && d <= i; ++d) {
      c[d] += w * binom;
      binom *= static_cast<double>(i - d) / static_cast<double>(d + 1);
    }
  }
  return TruncatedSeries(std::move(c));
}

double default_p0(const Model& m) {
  if (m.moments().theta >= 0.0) return 1.0 - m.moments().e_m;
  const LawResult lr = iterate_law(m, 256, 20000, 1e-11);
  return lr.law.pmf[0];
}

BivariateSeries f_series(const Model& m, std::size_t D, double p0) {
  const Pmf& nu = m.offspring().law;
  // inv = 1/(1+x); G = p0 + (1-p0) inv + y inv
  TruncatedSeries inv = [&] {
    std::vector<double> c(D + 1);
    for (std::size_t d = 0; d <= D; ++d) c[d] = (d % 2 == 0) ? 1.0 : -1.0;
    return TruncatedSeries(std::move(c));
  }();
  BivariateSeries G(D);
  G.add_univariate(inv.scaled(1.0 - p0), 0, 1.0);
  G.at(0, 0) += p0;
  G.add_univariate(inv, 1, 1.0);

  BivariateSeries F(D);
  BivariateSeries gk(D);
  gk.at(0, 0) = 1.0;  // G^0
  for (std::size_t k = 0; k < nu.support(); ++k) {
    if (k > 0) gk = gk * G;
    if (nu[k] == 0.0) continue;
    const TruncatedSeries ak = pgf_shifted(m.arrival_law(k), D);
    BivariateSeries akb(D);
    akb.add_univariate(ak, 0, 1.0);
    F = F + (akb * gk).scaled(nu[k]);
  }
  F.at(0, 0) -= 1.0;
  F.at(0, 1) -= 1.0;
  return F;
}

BivariateSeries f_series(const Model& m, std::size_t D) {
  return f_series(m, D, default_p0(m));
}

double f_eval(const Model& m, double p0, double x, double y) {
  const Pmf& nu = m.offspring().law;
  const double g = (y + 1.0 - p0) / (1.0 + x) + p0;
  double acc = 0.0, gpow = 1.0;
  for (std::size_t k = 0; k < nu.support(); ++k) {
    if (nu[k] > 0.0) {
      const Pmf& mu = m.arrival_law(k);
      double ak = 0.0;
      for (std::size_t i = mu.support(); i-- > 0;) ak = ak * (1.0 + x) + mu[i];
      acc += nu[k] * ak * gpow;
    }
    gpow *= g;
  }
  return acc - y - 1.0;
}

double f_eval_dy(const Model& m, double p0, double x, double y) {
  const Pmf& nu = m.offspring().law;
  const double g = (y + 1.0 - p0) / (1.0 + x) + p0;
  double acc = 0.0, gpow = 1.0;  // g^{k-1} built incrementally
  for (std::size_t k = 1; k < nu.support(); ++k) {
    if (k > 1) gpow *= g;
    if (nu[k] == 0.0) continue;
    const Pmf& mu = m.arrival_law(k);
    double ak = 0.0;
    for (std::size_t i = mu.support(); i-- > 0;) ak = ak * (1.0 + x) + mu[i];
    acc += nu[k] * static_cast<double>(k) * ak * gpow;
  }
  return acc / (1.0 + x) - 1.0;
}

std::pair<double, double> puiseux_c(const Model& m) {
  const auto& mm = m.moments();
  if (!(mm.theta > 0.0))
    throw Error(Errc::NotSubcritical, "Theta = " + std::to_string(mm.theta));
  const double root = std::sqrt(mm.theta);
  const double base = 1.0 + mm.sigma2 * mm.e_m - mm.e_sb_m;
  return {(base - root) / mm.sigma2, (base + root) / mm.sigma2};
}

PuiseuxBranch puiseux_branch(const Model& m, BranchSign sign, std::size_t D) {
  const auto [cm, cp] = puiseux_c(m);  // throws NotSubcritical when Theta <= 0
  const double sqrt_theta = std::sqrt(m.moments().theta);
  const double linear = sign == BranchSign::Minus ? -sqrt_theta : sqrt_theta;
  if (std::abs(linear) < 1e-12)
    throw Error(Errc::DegenerateStep, "vanishing linear coefficient sqrt(Theta)");
  const BivariateSeries F = f_series(m, D + 1, default_p0(m));
  PuiseuxBranch br;
  br.sign = sign;
  br.c.assign(D + 1, 0.0);
  br.c[1] = sign == BranchSign::Minus ? cm : cp;
  for (std::size_t k = 2; k <= D; ++k) {
    // residual r = [x^{k+1}] F(x, sum_{j<k} c_j x^j); then c_k = -r / (+-sqrt(Theta))
    std::vector<double> yc(k, 0.0);
    for (std::size_t j = 1; j < k; ++j) yc[j] = br.c[j];
    const TruncatedSeries composed =
        F.substitute_y(TruncatedSeries(std::move(yc)), k + 1);
    br.c[k] = -composed[k + 1] / linear;
  }
  return br;
}

double newton_continue(const Model& m, double x, double y_seed, double p0) {
  double y = y_seed;
  double f = f_eval(m, p0, x, y);
  for (int it = 0; it < 200; ++it) {
    if (std::abs(f) < 1e-12) return y;
    const double dy = f_eval_dy(m, p0, x, y);
    if (dy == 0.0 || !std::isfinite(dy)) break;
    double step = f / dy;
    // halve the step until |F| decreases
    for (int half = 0; half < 60; ++half) {
      const double y2 = y - step;
      const double f2 = f_eval(m, p0, x, y2);
      if (std::abs(f2) < std::abs(f)) {
        y = y2;
        f = f2;
        break;
      }
      step *= 0.5;
      if (half == 59) {
        throw Error(Errc::NewtonDiverged, "no descent at x = " + std::to_string(x));
      }
    }
  }
  if (std::abs(f) < 1e-12) return y;
  throw Error(Errc::NewtonDiverged,
              "residual " + std::to_string(f) + " at x = " + std::to_string(x));
}

double newton_continue(const Model& m, double x, double y_seed) {
  return newton_continue(m, x, y_seed, default_p0(m));
}

TruncatedSeries w_series(const Model& m, std::size_t D, double p0, std::size_t max_iters,
                         double tol) {
  const Pmf& nu = m.offspring().law;
  std::vector<TruncatedSeries> ak;
  ak.reserve(nu.support());
  for (std::size_t k = 0; k < nu.support(); ++k) {
    const Pmf& mu = m.arrival_law(k);
    std::vector<double> c(D + 1, 0.0);
    for (std::size_t i = 0; i <= D && i < mu.support(); ++i) c[i] = mu[i];
    ak.emplace_back(std::move(c));
  }
  TruncatedSeries w = TruncatedSeries::constant(p0, D);
  for (std::size_t it = 0; it < max_iters; ++it) {
    // inner = (W - p0)/z + p0: exact coefficient shift, constant pinned at p0
    TruncatedSeries inner = TruncatedSeries::constant(0.0, D);
    inner.at(0) = p0 + w[1];
    for (std::size_t k = 1; k < D; ++k) inner.at(k) = w[k + 1];
    TruncatedSeries next = TruncatedSeries::constant(0.0, D);
    TruncatedSeries ipow = TruncatedSeries::constant(1.0, D);
    for (std::size_t k = 0; k < nu.support(); ++k) {
      if (k > 0) ipow = ipow * inner;
      if (nu[k] != 0.0) next = next + (ak[k] * ipow).scaled(nu[k]);
    }
    next.at(0) = p0;
    double delta = 0.0;
    for (std::size_t k = 0; k <= D; ++k) delta = std::max(delta, std::abs(next[k] - w[k]));
    w = next;
    if (delta < tol) return w;
  }
  throw Error(Errc::NoConvergence, "w_series did not stabilize to tolerance");
}

TruncatedSeries w_series(const Model& m, std::size_t D) {
  return w_series(m, D, default_p0(m));
}

double coeff_ratio(const TruncatedSeries& s, std::size_t window) {
  const std::size_t hi = s.order();
  if (window < 1 || window > hi)
    throw Error(Errc::InsufficientSupport, "window exceeds series order");
  double log_sum = 0.0;
  for (std::size_t k = hi - window; k < hi; ++k) {
    if (!(s[k] > 0.0) || !(s[k + 1] > 0.0))
      throw Error(Errc::InsufficientSupport, "nonpositive coefficients in the window");
    log_sum += std::log(s[k + 1] / s[k]);
  }
  return std::exp(log_sum / static_cast<double>(window));
}

}  // namespace treepark
