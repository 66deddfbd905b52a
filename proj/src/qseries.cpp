#include "pmbsd/qseries.hpp"

#include <algorithm>
#include <stdexcept>

namespace pmbsd {

QSeries QSeries::monomial(const mpq_class& a, long k, long order) {
  QSeries s;
  s.start = k;
  s.c.assign(static_cast<size_t>(std::max(0L, order - k)), mpq_class(0));
  if (!s.c.empty()) s.c[0] = a;
  return s;
}

mpq_class QSeries::coeff(long k) const {
  if (k < start) return 0;
  if (k >= order()) throw std::out_of_range("coefficient beyond truncation order");
  return c[static_cast<size_t>(k - start)];
}

QSeries QSeries::operator+(const QSeries& o) const {
  long s = std::min(start, o.start), ord = std::min(order(), o.order());
  QSeries r;
  r.start = s;
  for (long k = s; k < ord; ++k) r.c.push_back(coeff(k) + o.coeff(k));
  return r;
}

QSeries QSeries::operator-(const QSeries& o) const { return *this + (-o); }

QSeries QSeries::operator*(const QSeries& o) const {
  QSeries r;
  r.start = start + o.start;
  long ord = std::min(order() + o.start, o.order() + start);
  long n = ord - r.start;
  r.c.assign(static_cast<size_t>(std::max(0L, n)), mpq_class(0));
  for (long i = 0; i < static_cast<long>(c.size()) && i < n; ++i) {
    if (c[static_cast<size_t>(i)] == 0) continue;
    for (long j = 0; j < static_cast<long>(o.c.size()) && i + j < n; ++j)
      r.c[static_cast<size_t>(i + j)] += c[static_cast<size_t>(i)] * o.c[static_cast<size_t>(j)];
  }
  return r;
}

QSeries QSeries::operator*(const mpq_class& s) const {
  QSeries r = *this;
  for (auto& x : r.c) x *= s;
  return r;
}

QSeries QSeries::truncate(long ord) const {
  QSeries r = *this;
  if (ord < order()) r.c.resize(static_cast<size_t>(std::max(0L, ord - start)));
  return r;
}

QSeries QSeries::trimmed() const {
  QSeries r = *this;
  size_t k = 0;
  while (k < r.c.size() && r.c[k] == 0) ++k;
  r.c.erase(r.c.begin(), r.c.begin() + static_cast<long>(k));
  r.start += static_cast<long>(k);
  return r;
}

bool QSeries::is_zero() const {
  return std::all_of(c.begin(), c.end(), [](const mpq_class& x) { return x == 0; });
}

QSeries QSeries::inverse() const {
  QSeries f = trimmed();
  if (f.c.empty()) throw std::domain_error("inverse of a series with no known nonzero term");
  size_t n = f.c.size();
  QSeries r;
  r.start = -f.start;
  r.c.assign(n, mpq_class(0));
  mpq_class inv0 = 1 / f.c[0];
  for (size_t k = 0; k < n; ++k) {
    mpq_class s = (k == 0) ? mpq_class(1) : mpq_class(0);
    for (size_t i = 1; i <= k; ++i) s -= f.c[i] * r.c[k - i];
    r.c[k] = s * inv0;
  }
  return r;
}

QSeries QSeries::derivative() const {
  QSeries r;
  r.start = start - 1;
  for (size_t i = 0; i < c.size(); ++i) r.c.push_back(c[i] * (start + static_cast<long>(i)));
  if (start == 0 && !r.c.empty()) {
    r.c.erase(r.c.begin());
    r.start = 0;
  }
  return r;
}

QSeries QSeries::integral() const {
  QSeries r;
  r.start = start + 1;
  for (size_t i = 0; i < c.size(); ++i) {
    long k = start + static_cast<long>(i);
    if (k == -1) {
      if (c[i] != 0) throw std::domain_error("integral of a series with a residue");
      r.c.push_back(0);
      continue;
    }
    r.c.push_back(c[i] / (k + 1));
  }
  if (r.start <= 0) {
    // zero constant term of the antiderivative
    long idx = -r.start;
    if (idx < static_cast<long>(r.c.size())) r.c[static_cast<size_t>(idx)] = 0;
  }
  return r;
}

QSeries QSeries::exp() const {
  QSeries f = *this;
  for (long k = f.start; k < 1 && k < f.order(); ++k)
    if (f.coeff(k) != 0) throw std::domain_error("exp needs a series without constant term");
  long ord = order();
  // e' = f' e, solved coefficientwise
  std::vector<mpq_class> a(static_cast<size_t>(std::max(0L, ord)), mpq_class(0));
  std::vector<mpq_class> g(a.size(), mpq_class(0));
  for (long k = 1; k < ord; ++k) g[static_cast<size_t>(k)] = f.coeff(k);
  if (!a.empty()) a[0] = 1;
  for (long n = 1; n < ord; ++n) {
    mpq_class s = 0;
    for (long k = 1; k <= n; ++k) s += k * g[static_cast<size_t>(k)] * a[static_cast<size_t>(n - k)];
    a[static_cast<size_t>(n)] = s / n;
  }
  return QSeries(0, std::move(a));
}

}  // namespace pmbsd
