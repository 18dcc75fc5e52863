#include "treepark/series.hpp"

#include <cmath>

#include "treepark/errors.hpp"

namespace treepark {

TruncatedSeries::TruncatedSeries(std::vector<double> coeffs) : c_(std::move(coeffs)) {
  if (c_.empty()) c_.push_back(0.0);
}

TruncatedSeries TruncatedSeries::constant(double a0, std::size_t order) {
  std::vector<double> c(order + 1, 0.0);
  c[0] = a0;
  return TruncatedSeries(std::move(c));
}

TruncatedSeries TruncatedSeries::x(std::size_t order) {
  std::vector<double> c(order + 1, 0.0);
  if (order >= 1) c[1] = 1.0;
  return TruncatedSeries(std::move(c));
}

TruncatedSeries TruncatedSeries::truncated(std::size_t order) const {
  std::vector<double> c(order + 1, 0.0);
  for (std::size_t k = 0; k <= order && k < c_.size(); ++k) c[k] = c_[k];
  return TruncatedSeries(std::move(c));
}

TruncatedSeries TruncatedSeries::operator+(const TruncatedSeries& o) const {
  std::vector<double> c(std::max(c_.size(), o.c_.size()), 0.0);
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = (*this)[k] + o[k];
  return TruncatedSeries(std::move(c));
}

TruncatedSeries TruncatedSeries::operator-(const TruncatedSeries& o) const {
  std::vector<double> c(std::max(c_.size(), o.c_.size()), 0.0);
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = (*this)[k] - o[k];
  return TruncatedSeries(std::move(c));
}

TruncatedSeries TruncatedSeries::operator*(const TruncatedSeries& o) const {
  const std::size_t d = std::max(order(), o.order());
  std::vector<double> c(d + 1, 0.0);
  for (std::size_t i = 0; i < c_.size() && i <= d; ++i) {
    if (c_[i] == 0.0) continue;
    for (std::size_t j = 0; j < o.c_.size() && i + j <= d; ++j)
      c[i + j] += c_[i] * o.c_[j];
  }
  return TruncatedSeries(std::move(c));
}

TruncatedSeries TruncatedSeries::scaled(double s) const {
  std::vector<double> c(c_);
  for (double& v : c) v *= s;
  return TruncatedSeries(std::move(c));
}

TruncatedSeries TruncatedSeries::compose(const TruncatedSeries& g) const {
  if (g[0] != 0.0)
    throw Error(Errc::ConfigError, "series composition requires g(0) = 0");
  const std::size_t d = std::max(order(), g.order());
  TruncatedSeries acc = TruncatedSeries::constant(0.0, d);
  TruncatedSeries gpow = TruncatedSeries::constant(1.0, d);
  for (std::size_t k = 0; k < c_.size(); ++k) {
    if (k > 0) gpow = gpow * g.truncated(d);
    if (c_[k] != 0.0) acc = acc + gpow.scaled(c_[k]);
  }
  return acc;
}

TruncatedSeries TruncatedSeries::reciprocal() const {
  if (c_[0] == 0.0)
    throw Error(Errc::ConfigError, "series reciprocal requires a nonzero constant term");
  const std::size_t d = order();
  std::vector<double> r(d + 1, 0.0);
  r[0] = 1.0 / c_[0];
  for (std::size_t k = 1; k <= d; ++k) {
    double s = 0.0;
    for (std::size_t j = 1; j <= k && j < c_.size(); ++j) s += c_[j] * r[k - j];
    r[k] = -s / c_[0];
  }
  return TruncatedSeries(std::move(r));
}

double TruncatedSeries::eval(double x) const {
  double acc = 0.0;
  for (std::size_t k = c_.size(); k-- > 0;) acc = acc * x + c_[k];
  return acc;
}

BivariateSeries::BivariateSeries(std::size_t order)
    : d_(order), a_((order + 1) * (order + 1), 0.0) {}

BivariateSeries BivariateSeries::operator+(const BivariateSeries& o) const {
  BivariateSeries r(std::max(d_, o.d_));
  for (std::size_t i = 0; i <= r.d_; ++i)
    for (std::size_t j = 0; i + j <= r.d_; ++j) r.at(i, j) = coeff(i, j) + o.coeff(i, j);
  return r;
}

BivariateSeries BivariateSeries::operator*(const BivariateSeries& o) const {
  BivariateSeries r(std::max(d_, o.d_));
  for (std::size_t i1 = 0; i1 <= d_; ++i1)
    for (std::size_t j1 = 0; i1 + j1 <= d_; ++j1) {
      const double a = coeff(i1, j1);
      if (a == 0.0) continue;
      const std::size_t rem = r.d_ - i1 - j1;
      for (std::size_t i2 = 0; i2 <= rem && i2 <= o.d_; ++i2)
        for (std::size_t j2 = 0; i2 + j2 <= rem && i2 + j2 <= o.d_; ++j2) {
          const double b = o.coeff(i2, j2);
          if (b != 0.0) r.at(i1 + i2, j1 + j2) += a * b;
        }
    }
  return r;
}

BivariateSeries BivariateSeries::scaled(double s) const {
  BivariateSeries r(d_);
  for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] * s;
  return r;
}

void BivariateSeries::add_univariate(const TruncatedSeries& s, std::size_t j_shift, double w) {
  for (std::size_t i = 0; i + j_shift <= d_; ++i) {
    const double v = s[i];
    if (v != 0.0) at(i, j_shift) += w * v;
  }
}

TruncatedSeries BivariateSeries::substitute_y(const TruncatedSeries& y,
                                              std::size_t order) const {
  if (y[0] != 0.0)
    throw Error(Errc::ConfigError, "substitution requires y(0) = 0");
  TruncatedSeries acc = TruncatedSeries::constant(0.0, order);
  TruncatedSeries ypow = TruncatedSeries::constant(1.0, order);
  const TruncatedSeries yt = y.truncated(order);
  for (std::size_t j = 0; j <= d_; ++j) {
    if (j > 0) ypow = ypow * yt;
    for (std::size_t i = 0; i + j <= d_ && i <= order; ++i) {
      const double a = coeff(i, j);
      if (a == 0.0) continue;
      // add a * x^i * ypow
      for (std::size_t k = 0; i + k <= order; ++k) acc.at(i + k) += a * ypow[k];
    }
  }
  return acc;
}

double BivariateSeries::eval(double x, double y) const {
  double acc = 0.0;
  double ypow = 1.0;
  for (std::size_t j = 0; j <= d_; ++j) {
    double row = 0.0;
    for (std::size_t i = d_ - j + 1; i-- > 0;) row = row * x + coeff(i, j);
    acc += row * ypow;
    ypow *= y;
  }
  return acc;
}

}  // namespace treepark
