#pragma once

#include <cstddef>
#include <vector>

#include "treepark/rng.hpp"

namespace treepark {

/// Finite-support probability mass function on {0, 1, 2, ...}.
/// Entries are nonnegative and sum to 1 within 1e-12 after construction.
class Pmf {
 public:
  Pmf() : p_{1.0} {}
  explicit Pmf(std::vector<double> probs, bool renormalize = false);

  static Pmf delta(std::size_t k);
  static Pmf bernoulli(double p);
  /// Poisson(alpha) truncated at `truncation` and renormalized.
  static Pmf poisson(double alpha, std::size_t truncation);
  /// nu_k = 2^-(k+1) truncated at k_max and renormalized (critical geometric).
  static Pmf geometric_half(std::size_t k_max);

  double operator[](std::size_t k) const { return k < p_.size() ? p_[k] : 0.0; }
  const std::vector<double>& probs() const { return p_; }
  /// Largest index carrying positive mass, plus one.
  std::size_t support() const { return p_.size(); }

  double mean() const;
  double variance() const;
  /// E[L(L-1)] = sigma^2 + m^2 - m.
  double second_factorial_moment() const;

  /// Exponential tilt p_k theta^k, renormalized. theta > 0.
  Pmf tilted(double theta) const;
  /// Mixture (1-t) delta_0 + t this.
  Pmf diluted(double t) const;

  bool is_delta(std::size_t k) const;

  bool operator==(const Pmf&) const = default;

 private:
  std::vector<double> p_;
};

/// Sampling table for a Pmf: one uniform per draw, forward scan of the
/// cumulative sums (our laws put most mass at small k).
class CdfSampler {
 public:
  CdfSampler() = default;
  explicit CdfSampler(const Pmf& pmf);

  std::uint32_t sample(Rng& rng) const {
    const double u = rng.u01();
    std::size_t k = 0;
    while (u >= cdf_[k]) ++k;
    return static_cast<std::uint32_t>(k);
  }

 private:
  std::vector<double> cdf_;
};

}  // namespace treepark
