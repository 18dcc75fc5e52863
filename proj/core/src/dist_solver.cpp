#include "treepark/dist_solver.hpp"

#include <algorithm>
#include <cmath>

#include "treepark/errors.hpp"

namespace treepark {

namespace {

// c = a * b truncated at order N (sizes N+1)
void conv_into(std::span<const double> a, std::span<const double> b, std::vector<double>& c) {
  const std::size_t n = a.size();
  c.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double ai = a[i];
    if (ai == 0.0) continue;
    const std::size_t jmax = n - i;
    for (std::size_t j = 0; j < jmax; ++j) c[i + j] += ai * b[j];
  }
}

// acc += w * (a * mu) truncated, with mu a short pmf
void conv_acc_weighted(std::span<const double> a, const Pmf& mu, double w,
                       std::vector<double>& acc) {
  const std::size_t n = a.size();
  for (std::size_t j = 0; j < mu.support(); ++j) {
    const double wj = w * mu[j];
    if (wj == 0.0) continue;
    const std::size_t imax = n - j;
    for (std::size_t i = 0; i < imax; ++i) acc[i + j] += wj * a[i];
  }
}

std::vector<double> flux_vec(std::span<const double> p) {
  std::vector<double> q(p.size(), 0.0);
  q[0] = p[0] + (p.size() > 1 ? p[1] : 0.0);
  for (std::size_t k = 2; k < p.size(); ++k) q[k - 1] = p[k];
  return q;
}

}  // namespace

namespace {

// one application of the (DE) map to the raw pmf buffer
void de_step_into(const Model& m, const std::vector<double>& p, std::vector<double>& acc,
                  std::vector<double>& powk, std::vector<double>& tmp) {
  const Pmf& nu = m.offspring().law;
  const std::size_t N = p.size() - 1;
  const std::vector<double> q = flux_vec(p);
  acc.assign(N + 1, 0.0);
  powk.assign(N + 1, 0.0);
  powk[0] = 1.0;  // q^{*0}
  for (std::size_t k = 0; k < nu.support(); ++k) {
    if (k > 0) {
      conv_into(powk, q, tmp);
      powk.swap(tmp);
    }
    if (nu[k] > 0.0) conv_acc_weighted(powk, m.arrival_law(k), nu[k], acc);
  }
}

}  // namespace

DistVector de_step(const Model& m, const DistVector& dist) {
  std::vector<double> acc, powk, tmp;
  de_step_into(m, dist.pmf, acc, powk, tmp);
  DistVector out;
  double sum = 0.0;
  for (double v : acc) sum += v;
  out.pmf = std::move(acc);
  out.mass_defect = std::max(0.0, 1.0 - sum);
  return out;
}

LawResult iterate_law(const Model& m, std::size_t N, std::size_t max_iters, double tol) {
  if (N < 1) throw Error(Errc::ConfigError, "N must be >= 1");
  std::vector<double> p(N + 1, 0.0);
  p[0] = 1.0;
  std::vector<double> acc, powk, tmp;
  LawResult out;
  for (std::size_t it = 1; it <= max_iters; ++it) {
    de_step_into(m, p, acc, powk, tmp);
    double tv = 0.0;
    for (std::size_t i = 0; i <= N; ++i) tv += std::abs(acc[i] - p[i]);
    tv *= 0.5;
    p.swap(acc);
    out.iterations = it;
    out.last_tv = tv;
    out.tv_history.push_back(tv);
    if (tv < tol) {
      double sum = 0.0;
      for (double v : p) sum += v;
      out.law.pmf = std::move(p);
      out.law.mass_defect = std::max(0.0, 1.0 - sum);
      return out;
    }
  }
  throw Error(Errc::NoConvergence,
              "no convergence after " + std::to_string(max_iters) +
                  " iterations, last TV = " + std::to_string(out.last_tv));
}

DistVector flux_law(const DistVector& dist) {
  DistVector out;
  out.pmf = flux_vec(dist.pmf);
  out.mass_defect = dist.mass_defect;
  return out;
}

double tail_rate(const DistVector& dist, std::size_t window) {
  const auto& p = dist.pmf;
  if (window < 1 || window + 1 > p.size())
    throw Error(Errc::InsufficientSupport, "window " + std::to_string(window) +
                                               " exceeds pmf order " + std::to_string(p.size() - 1));
  const std::size_t hi = p.size() - 1;
  const std::size_t lo = hi - window;
  constexpr double kFloor = 1e-300;
  double log_sum = 0.0;
  for (std::size_t k = lo; k < hi; ++k) {
    if (p[k] < kFloor || p[k + 1] < kFloor)
      throw Error(Errc::InsufficientSupport,
                  "pmf not strictly positive on the fitting window (index " +
                      std::to_string(k) + ")");
    log_sum += std::log(p[k + 1] / p[k]);
  }
  return std::exp(log_sum / static_cast<double>(window));
}

double law_mean(const DistVector& dist) {
  double s = 0.0;
  for (std::size_t k = 1; k < dist.pmf.size(); ++k) s += static_cast<double>(k) * dist.pmf[k];
  return s;
}

double law_pgf(const DistVector& dist, double z) {
  double acc = 0.0;
  for (std::size_t k = dist.pmf.size(); k-- > 0;) acc = acc * z + dist.pmf[k];
  return acc;
}

namespace {
double pgf(const Pmf& law, double z) {
  double acc = 0.0;
  for (std::size_t k = law.support(); k-- > 0;) acc = acc * z + law[k];
  return acc;
}
}  // namespace

double eq_residual(const Model& m, const DistVector& dist, double z) {
  const double w = law_pgf(dist, z);
  const double p0 = dist.pmf[0];
  const double inner = (w - p0) / z + p0;
  const Pmf& nu = m.offspring().law;
  double rhs = 0.0;
  double ipow = 1.0;
  for (std::size_t k = 0; k < nu.support(); ++k) {
    if (nu[k] > 0.0) rhs += nu[k] * pgf(m.arrival_law(k), z) * ipow;
    ipow *= inner;
  }
  return w - rhs;
}

}  // namespace treepark
