#include "treepark/model.hpp"

#include <cmath>

#include "treepark/errors.hpp"

namespace treepark {

namespace {

constexpr double kCriticalTol = 1e-9;

ModelMoments compute_moments(const OffspringDist& off, const ArrivalFamily& arr) {
  ModelMoments mm;
  mm.sigma2 = off.variance;
  const auto& nu = off.law;
  for (std::size_t k = 0; k < nu.support(); ++k) {
    if (nu[k] == 0.0) continue;
    const Pmf& mu = arr.at(k);
    const double m = mu.mean();
    const double q = mu.second_factorial_moment();
    mm.e_m += nu[k] * m;
    mm.e_sb_m += static_cast<double>(k) * nu[k] * m;
    mm.e_q += nu[k] * q;
  }
  mm.theta = (1.0 - mm.e_sb_m) * (1.0 - mm.e_sb_m) - mm.sigma2 * mm.e_q;
  return mm;
}

}  // namespace

Model::Model(OffspringDist offspring, ArrivalFamily arrivals)
    : offspring_(std::move(offspring)), arrivals_(std::move(arrivals)) {
  const auto& nu = offspring_.law;
  if (nu.is_delta(1)) throw Error(Errc::DegenerateModel, "offspring law is delta_1");
  if (std::abs(offspring_.mean - 1.0) > kCriticalTol)
    throw Error(Errc::NonCriticalOffspring,
                "offspring mean " + std::to_string(offspring_.mean));
  bool some_nondeg = false;
  for (std::size_t k = 0; k < nu.support(); ++k)
    if (nu[k] > 0.0 && !arrivals_.at(k).is_delta(1)) some_nondeg = true;
  if (!some_nondeg)
    throw Error(Errc::DegenerateModel, "every arrival law on the offspring support is delta_1");
  moments_ = compute_moments(offspring_, arrivals_);
}

const char* phase_name(Phase p) {
  switch (p) {
    case Phase::Subcritical: return "subcritical";
    case Phase::Critical: return "critical";
    case Phase::Supercritical: return "supercritical";
  }
  return "?";
}

OffspringDist make_offspring(const Pmf& law, bool recenter) {
  Pmf nu = law;
  if (recenter) {
    // Exponential tilt nu_k theta^k: the tilted mean is strictly increasing
    // in theta, so bisection pins mean 1 to machine precision.
    double lo = 1e-9, hi = 1e9;
    if (nu.tilted(lo).mean() > 1.0 || nu.tilted(hi).mean() < 1.0)
      throw Error(Errc::NonCriticalOffspring, "law cannot be recentered to mean 1");
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (nu.tilted(mid).mean() < 1.0 ? lo : hi) = mid;
    }
    nu = nu.tilted(0.5 * (lo + hi));
  }
  OffspringDist off;
  off.mean = nu.mean();
  off.variance = nu.variance();
  off.law = std::move(nu);
  return off;
}

ArrivalFamily uniform_arrivals(const Pmf& law, std::size_t k_max) {
  ArrivalFamily fam;
  fam.laws.assign(k_max + 1, law);
  fam.default_law = law;
  return fam;
}

ArrivalFamily leaf_arrivals(const Pmf& law, std::size_t k_max) {
  ArrivalFamily fam;
  fam.laws.assign(k_max + 1, Pmf::delta(0));
  fam.laws[0] = law;
  fam.default_law = Pmf::delta(0);
  return fam;
}

double theta(const Model& m) { return m.moments().theta; }

Regime classify(const Model& m, double tol) {
  const auto& mm = m.moments();
  Regime r;
  r.theta = mm.theta;
  r.hypothesis_holds = mm.e_sb_m <= 1.0 + 1e-12;
  if (!r.hypothesis_holds) {
    // Parking on the size-biased spine is already supercritical here.
    r.phase = Phase::Supercritical;
    return r;
  }
  if (mm.theta > tol)
    r.phase = Phase::Subcritical;
  else if (mm.theta < -tol)
    r.phase = Phase::Supercritical;
  else
    r.phase = Phase::Critical;
  return r;
}

double t_max(const Model& m) {
  const auto& mm = m.moments();
  const double b = mm.e_sb_m;
  const double seq = mm.sigma2 * mm.e_q;
  if (seq <= 0.0) return kInfinity;
  // (1 - b t)^2 = seq * t, i.e. b^2 t^2 - (2b + seq) t + 1 = 0. The smaller
  // root in the numerically stable form 2 / (B + sqrt(B^2 - 4 b^2)) also
  // covers b = 0.
  const double B = 2.0 * b + seq;
  const double disc = seq * (4.0 * b + seq);
  const double root = 2.0 / (B + std::sqrt(disc));
  return root <= 1.0 ? root : kInfinity;
}

double mean_flux_curve(const Model& m, double t) {
  if (!(t >= 0.0 && t <= 1.0))
    throw Error(Errc::InvalidT, "t = " + std::to_string(t) + " outside [0,1]");
  if (t > t_max(m)) return kInfinity;
  const auto& mm = m.moments();
  const double a = 1.0 - mm.e_sb_m * t;
  const double under = a * a - mm.sigma2 * mm.e_q * t;
  if (mm.sigma2 == 0.0) return 0.0;  // nu = delta_1 is rejected upstream; guard anyway
  return (a - std::sqrt(std::max(under, 0.0))) / mm.sigma2;
}

Model dilute(const Model& m, double t) {
  if (!(t >= 0.0 && t <= 1.0))
    throw Error(Errc::InvalidT, "t = " + std::to_string(t) + " outside [0,1]");
  ArrivalFamily fam;
  fam.laws.reserve(m.arrivals().laws.size());
  for (const Pmf& mu : m.arrivals().laws) fam.laws.push_back(mu.diluted(t));
  fam.default_law = m.arrivals().default_law.diluted(t);
  return Model(m.offspring(), std::move(fam));
}

double theoretical_flux_mean(const Model& m) {
  const auto& mm = m.moments();
  if (mm.theta < 0.0) return kInfinity;
  return (1.0 - mm.e_sb_m - std::sqrt(mm.theta)) / mm.sigma2;
}

}  // namespace treepark
