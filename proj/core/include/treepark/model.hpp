#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "treepark/pmf.hpp"

namespace treepark {

/// Critical offspring law: mean 1 within 1e-9, not delta_1.
struct OffspringDist {
  Pmf law;
  double mean = 0.0;
  double variance = 0.0;  // Sigma^2
};

/// Car-arrival laws per vertex outdegree. Degrees beyond the stored range
/// fall back to default_law (relevant for externally supplied trees).
struct ArrivalFamily {
  std::vector<Pmf> laws;  // index = degree, 0..k_max
  Pmf default_law = Pmf::delta(0);

  const Pmf& at(std::size_t degree) const {
    return degree < laws.size() ? laws[degree] : default_law;
  }
};

struct ModelMoments {
  double e_sb_m = 0.0;   // E_nubar[m] = sum_k k nu_k m_(k)
  double e_m = 0.0;      // E_nu[m]
  double e_q = 0.0;      // E_nu[sigma^2 + m^2 - m]
  double sigma2 = 0.0;   // offspring variance
  double theta = 0.0;    // (1 - e_sb_m)^2 - sigma2 * e_q
};

/// A parking model (nu, {mu_(k)}) with its derived moments. Immutable after
/// construction; safe to share across threads.
class Model {
 public:
  Model(OffspringDist offspring, ArrivalFamily arrivals);

  const OffspringDist& offspring() const { return offspring_; }
  const ArrivalFamily& arrivals() const { return arrivals_; }
  const ModelMoments& moments() const { return moments_; }
  const Pmf& arrival_law(std::size_t degree) const { return arrivals_.at(degree); }

 private:
  OffspringDist offspring_;
  ArrivalFamily arrivals_;
  ModelMoments moments_;
};

enum class Phase { Subcritical, Critical, Supercritical };

struct Regime {
  Phase phase;
  /// Theorem hypothesis E_nubar[m] <= 1; when it fails the phase is reported
  /// as Supercritical with this flag cleared.
  bool hypothesis_holds;
  double theta;
};

const char* phase_name(Phase p);

/// Builds the offspring side from a raw vector: validates positivity,
/// renormalizes, enforces criticality (|mean-1| <= 1e-9) unless `recenter`,
/// in which case the law is exponentially tilted to mean exactly 1.
OffspringDist make_offspring(const Pmf& law, bool recenter = false);

/// Uniform arrivals: the same law at every degree.
ArrivalFamily uniform_arrivals(const Pmf& law, std::size_t k_max);
/// Arrivals only at leaves (degree 0); delta_0 elsewhere.
ArrivalFamily leaf_arrivals(const Pmf& law, std::size_t k_max);

double theta(const Model& m);
Regime classify(const Model& m, double tol = 1e-10);

/// Smallest t in [0,1] where (1 - E_nubar[m] t)^2 = Sigma^2 E_nu[q] t;
/// +infinity if none (also when E_nu[q] = 0, where the mean flux never
/// blows up).
double t_max(const Model& m);

/// Mean root flux Phi(t) under arrival dilution t; +infinity past t_max.
double mean_flux_curve(const Model& m, double t);

/// Arrival laws replaced by (1-t) delta_0 + t mu_(k); offspring unchanged.
Model dilute(const Model& m, double t);

/// (1 - E_nubar[m] - sqrt(Theta)) / Sigma^2 for Theta >= 0, else +infinity.
/// Meaningful under the hypothesis E_nubar[m] <= 1.
double theoretical_flux_mean(const Model& m);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

}  // namespace treepark
