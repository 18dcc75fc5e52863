#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace treepark {

/// Univariate power series truncated at order D: coefficients a_0..a_D.
/// Ring operations are exact through order D.
class TruncatedSeries {
 public:
  TruncatedSeries() : c_{0.0} {}
  explicit TruncatedSeries(std::vector<double> coeffs);
  static TruncatedSeries constant(double a0, std::size_t order);
  static TruncatedSeries x(std::size_t order);  // the identity series

  std::size_t order() const { return c_.size() - 1; }
  double operator[](std::size_t k) const { return k < c_.size() ? c_[k] : 0.0; }
  double& at(std::size_t k) { return c_[k]; }
  const std::vector<double>& coeffs() const { return c_; }

  TruncatedSeries truncated(std::size_t order) const;

  TruncatedSeries operator+(const TruncatedSeries& o) const;
  TruncatedSeries operator-(const TruncatedSeries& o) const;
  TruncatedSeries operator*(const TruncatedSeries& o) const;
  TruncatedSeries scaled(double s) const;

  /// this(g(x)); requires g(0) = 0.
  TruncatedSeries compose(const TruncatedSeries& g) const;

  /// 1 / this; requires a nonzero constant term.
  TruncatedSeries reciprocal() const;

  /// Horner evaluation of the truncating polynomial.
  double eval(double x) const;

 private:
  std::vector<double> c_;
};

/// Bivariate series sum a_{i,j} x^i y^j, exact through total order D.
class BivariateSeries {
 public:
  explicit BivariateSeries(std::size_t order);

  std::size_t order() const { return d_; }
  double coeff(std::size_t i, std::size_t j) const {
    return i + j <= d_ ? a_[i * (d_ + 1) + j] : 0.0;
  }
  double& at(std::size_t i, std::size_t j) { return a_[i * (d_ + 1) + j]; }

  BivariateSeries operator+(const BivariateSeries& o) const;
  BivariateSeries operator*(const BivariateSeries& o) const;
  BivariateSeries scaled(double s) const;
  /// Adds w * s(x) * y^j_shift.
  void add_univariate(const TruncatedSeries& s, std::size_t j_shift, double w);

  /// F(x, y(x)) truncated at `order`; requires y(0) = 0.
  TruncatedSeries substitute_y(const TruncatedSeries& y, std::size_t order) const;

  /// Pointwise evaluation of the truncating polynomial.
  double eval(double x, double y) const;

 private:
  std::size_t d_;
  std::vector<double> a_;  // (d+1) x (d+1), entries with i+j > d_ stay zero
};

}  // namespace treepark
