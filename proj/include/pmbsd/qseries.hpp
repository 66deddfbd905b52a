#pragma once

#include <gmpxx.h>

#include <vector>

namespace pmbsd {

// Laurent series over Q: sum_k c[k] t^{start+k}, known modulo t^{order()}.
struct QSeries {
  long start = 0;
  std::vector<mpq_class> c;

  QSeries() = default;
  QSeries(long s, std::vector<mpq_class> coeffs) : start(s), c(std::move(coeffs)) {}
  static QSeries monomial(const mpq_class& a, long k, long order);
  static QSeries constant(const mpq_class& a, long order) { return monomial(a, 0, order); }

  long order() const { return start + static_cast<long>(c.size()); }
  mpq_class coeff(long k) const;

  QSeries operator+(const QSeries& o) const;
  QSeries operator-(const QSeries& o) const;
  QSeries operator*(const QSeries& o) const;
  QSeries operator*(const mpq_class& s) const;
  QSeries operator-() const { return *this * mpq_class(-1); }

  QSeries truncate(long order) const;
  // drop leading zero coefficients
  QSeries trimmed() const;
  QSeries inverse() const;
  QSeries derivative() const;
  // antiderivative with zero constant term; requires no t^{-1} term
  QSeries integral() const;
  // exp of a series with start >= 1
  QSeries exp() const;
  bool is_zero() const;
};

}  // namespace pmbsd
