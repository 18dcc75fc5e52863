#include "treepark/pmf.hpp"

#include <cmath>
#include <limits>

#include "treepark/errors.hpp"

namespace treepark {

namespace {
constexpr double kNormTol = 1e-12;
}

Pmf::Pmf(std::vector<double> probs, bool renormalize) : p_(std::move(probs)) {
  if (p_.empty()) throw Error(Errc::NegativeProbability, "empty probability vector");
  double sum = 0.0;
  for (double v : p_) {
    if (!(v >= 0.0)) throw Error(Errc::NegativeProbability, "entry " + std::to_string(v));
    sum += v;
  }
  if (sum <= 0.0) throw Error(Errc::NegativeProbability, "zero total mass");
  if (renormalize) {
    for (double& v : p_) v /= sum;
  } else if (std::abs(sum - 1.0) > kNormTol) {
    throw Error(Errc::NegativeProbability,
                "probabilities sum to " + std::to_string(sum) + ", not 1");
  }
  while (p_.size() > 1 && p_.back() == 0.0) p_.pop_back();
}

Pmf Pmf::delta(std::size_t k) {
  std::vector<double> p(k + 1, 0.0);
  p[k] = 1.0;
  return Pmf(std::move(p));
}

Pmf Pmf::bernoulli(double p) {
  return Pmf({1.0 - p, p});
}

Pmf Pmf::poisson(double alpha, std::size_t truncation) {
  std::vector<double> p(truncation + 1);
  double term = std::exp(-alpha);
  for (std::size_t k = 0; k <= truncation; ++k) {
    p[k] = term;
    term *= alpha / static_cast<double>(k + 1);
  }
  return Pmf(std::move(p), /*renormalize=*/true);
}

Pmf Pmf::geometric_half(std::size_t k_max) {
  std::vector<double> p(k_max + 1);
  double term = 0.5;
  for (std::size_t k = 0; k <= k_max; ++k) {
    p[k] = term;
    term *= 0.5;
  }
  return Pmf(std::move(p), /*renormalize=*/true);
}

double Pmf::mean() const {
  double m = 0.0;
  for (std::size_t k = 1; k < p_.size(); ++k) m += static_cast<double>(k) * p_[k];
  return m;
}

double Pmf::variance() const {
  const double m = mean();
  double m2 = 0.0;
  for (std::size_t k = 1; k < p_.size(); ++k)
    m2 += static_cast<double>(k) * static_cast<double>(k) * p_[k];
  return m2 - m * m;
}

double Pmf::second_factorial_moment() const {
  double s = 0.0;
  for (std::size_t k = 2; k < p_.size(); ++k)
    s += static_cast<double>(k) * static_cast<double>(k - 1) * p_[k];
  return s;
}

Pmf Pmf::tilted(double theta) const {
  std::vector<double> p(p_.size());
  double w = 1.0;
  for (std::size_t k = 0; k < p_.size(); ++k) {
    p[k] = p_[k] * w;
    w *= theta;
  }
  return Pmf(std::move(p), /*renormalize=*/true);
}

Pmf Pmf::diluted(double t) const {
  // Mixing preserves normalization, and skipping the renormalizing division
  // keeps diluted(1) bit-identical to the original law.
  std::vector<double> p(p_.size());
  for (std::size_t k = 0; k < p_.size(); ++k) p[k] = t * p_[k];
  p[0] += 1.0 - t;
  return Pmf(std::move(p));
}

bool Pmf::is_delta(std::size_t k) const {
  return (*this)[k] == 1.0;
}

CdfSampler::CdfSampler(const Pmf& pmf) : cdf_(pmf.probs()) {
  double acc = 0.0;
  for (double& v : cdf_) {
    acc += v;
    v = acc;
  }
  // guard entry: u01() < 1, so a final cdf of +1 ends the scan unconditionally
  cdf_.back() = std::numeric_limits<double>::infinity();
}

}  // namespace treepark
