#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace pmbsd {

// Exact element a + b*alpha of Q(alpha), alpha^2 = -p.
struct QAlpha {
  long p = 0;
  mpq_class a, b;

  QAlpha() = default;
  QAlpha(long prime, const mpq_class& x, const mpq_class& y = 0) : p(prime), a(x), b(y) {
    a.canonicalize();
    b.canonicalize();
  }
  static QAlpha alpha(long prime) { return QAlpha(prime, 0, 1); }

  QAlpha operator+(const QAlpha& o) const { return QAlpha(p, a + o.a, b + o.b); }
  QAlpha operator-(const QAlpha& o) const { return QAlpha(p, a - o.a, b - o.b); }
  QAlpha operator-() const { return QAlpha(p, -a, -b); }
  QAlpha operator*(const QAlpha& o) const {
    return QAlpha(p, a * o.a - p * b * o.b, a * o.b + b * o.a);
  }
  QAlpha conj() const { return QAlpha(p, a, -b); }
  mpq_class norm() const { return a * a + p * b * b; }
  QAlpha operator/(const QAlpha& o) const {
    mpq_class n = o.norm();
    if (n == 0) throw std::domain_error("division by zero in Q(alpha)");
    QAlpha t = *this * o.conj();
    return QAlpha(p, t.a / n, t.b / n);
  }
  QAlpha& operator+=(const QAlpha& o) { return *this = *this + o; }
  QAlpha& operator-=(const QAlpha& o) { return *this = *this - o; }
  QAlpha& operator*=(const QAlpha& o) { return *this = *this * o; }
  bool is_zero() const { return a == 0 && b == 0; }
  bool operator==(const QAlpha& o) const { return a == o.a && b == o.b; }
  std::string str() const { return a.get_str() + " + (" + b.get_str() + ")*alpha"; }
};

}  // namespace pmbsd
