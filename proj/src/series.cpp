#include "pmbsd/series.hpp"

#include <algorithm>

namespace pmbsd {

TruncatedSeries::TruncatedSeries(long p, std::vector<PadicElement> coeffs)
    : p_(p), c_(std::move(coeffs)) {
  for (const auto& c : c_)
    if (c.p() != p_) throw std::invalid_argument("series coefficient over the wrong prime");
}

TruncatedSeries TruncatedSeries::zero(long p, long M, long prec, bool ext) {
  return TruncatedSeries(p, std::vector<PadicElement>(static_cast<size_t>(M),
                                                      PadicElement::zero(p, prec, ext)));
}

TruncatedSeries TruncatedSeries::constant(const PadicElement& c, long M) {
  std::vector<PadicElement> v(static_cast<size_t>(M),
                              PadicElement::zero(c.p(), PadicElement::kExact, c.is_extension()));
  if (M > 0) v[0] = c;
  return TruncatedSeries(c.p(), std::move(v));
}

TruncatedSeries TruncatedSeries::from_integers(long p, const std::vector<mpz_class>& c) {
  std::vector<PadicElement> v;
  for (const auto& x : c) v.emplace_back(p, x);
  return TruncatedSeries(p, std::move(v));
}

bool TruncatedSeries::is_extension() const {
  return std::any_of(c_.begin(), c_.end(), [](const PadicElement& x) { return x.is_extension(); });
}

TruncatedSeries TruncatedSeries::operator+(const TruncatedSeries& o) const {
  long M = std::min(trunc_order(), o.trunc_order());
  std::vector<PadicElement> v;
  for (long i = 0; i < M; ++i) v.push_back((*this)[i] + o[i]);
  return TruncatedSeries(p_, std::move(v));
}

TruncatedSeries TruncatedSeries::operator-() const {
  std::vector<PadicElement> v;
  for (const auto& c : c_) v.push_back(-c);
  return TruncatedSeries(p_, std::move(v));
}

TruncatedSeries TruncatedSeries::operator-(const TruncatedSeries& o) const { return *this + (-o); }

TruncatedSeries TruncatedSeries::operator*(const TruncatedSeries& o) const {
  long M = std::min(trunc_order(), o.trunc_order());
  bool ext = is_extension() || o.is_extension();
  std::vector<PadicElement> v;
  for (long k = 0; k < M; ++k) {
    PadicElement s = PadicElement::zero(p_, PadicElement::kExact, ext);
    for (long i = 0; i <= k; ++i) s += (*this)[i] * o[k - i];
    v.push_back(s);
  }
  return TruncatedSeries(p_, std::move(v));
}

TruncatedSeries TruncatedSeries::operator*(const PadicElement& s) const {
  std::vector<PadicElement> v;
  for (const auto& c : c_) v.push_back(c * s);
  return TruncatedSeries(p_, std::move(v));
}

TruncatedSeries TruncatedSeries::truncate(long M) const {
  if (M > trunc_order()) throw std::invalid_argument("cannot raise truncation order");
  return TruncatedSeries(p_, std::vector<PadicElement>(c_.begin(), c_.begin() + M));
}

TruncatedSeries TruncatedSeries::shift(long k) const {
  std::vector<PadicElement> v(static_cast<size_t>(k),
                              PadicElement::zero(p_, PadicElement::kExact, is_extension()));
  v.insert(v.end(), c_.begin(), c_.end());
  return TruncatedSeries(p_, std::move(v));
}

TruncatedSeries TruncatedSeries::conj() const {
  std::vector<PadicElement> v;
  for (const auto& c : c_) v.push_back(c.conj());
  return TruncatedSeries(p_, std::move(v));
}

TruncatedSeries TruncatedSeries::re() const {
  std::vector<PadicElement> v;
  for (const auto& c : c_) v.push_back(c.re());
  return TruncatedSeries(p_, std::move(v));
}

TruncatedSeries TruncatedSeries::im() const {
  std::vector<PadicElement> v;
  for (const auto& c : c_) v.push_back(c.im());
  return TruncatedSeries(p_, std::move(v));
}

TruncatedSeries TruncatedSeries::to_qp() const {
  std::vector<PadicElement> v;
  for (const auto& c : c_) v.push_back(c.to_qp());
  return TruncatedSeries(p_, std::move(v));
}

TruncatedSeries TruncatedSeries::with_prec(long prec) const {
  std::vector<PadicElement> v;
  for (const auto& c : c_) v.push_back(c.with_prec(prec));
  return TruncatedSeries(p_, std::move(v));
}

bool TruncatedSeries::agrees(const TruncatedSeries& o) const {
  long M = std::min(trunc_order(), o.trunc_order());
  for (long i = 0; i < M; ++i)
    if (!(*this)[i].agrees(o[i])) return false;
  return true;
}

bool TruncatedSeries::same(const TruncatedSeries& o) const {
  if (p_ != o.p_ || c_.size() != o.c_.size()) return false;
  for (size_t i = 0; i < c_.size(); ++i)
    if (!c_[i].same(o.c_[i])) return false;
  return true;
}

TruncatedSeries cyclotomic(long p, long n, long M) {
  if (n < 1) throw std::invalid_argument("cyclotomic: n >= 1 required");
  mpz_class step = ipow(p, n - 1);
  std::vector<mpz_class> c(static_cast<size_t>(M), 0);
  for (long i = 0; i < p; ++i) {
    mpz_class e = step * i;
    for (long k = 0; k < M; ++k) {
      mpz_class b;
      if (e < k) break;
      mpz_bin_ui(b.get_mpz_t(), e.get_mpz_t(), static_cast<unsigned long>(k));
      c[static_cast<size_t>(k)] += b;
    }
  }
  return TruncatedSeries::from_integers(p, c);
}

namespace {

long min_valuation(const TruncatedSeries& f) {
  long m = LONG_MAX / 4;
  for (const auto& c : f.coeffs()) {
    Valuation v = c.valuation();
    if (v.kind == Valuation::Exact) m = std::min(m, PadicElement::floor_half(v.twice));
  }
  return m;
}

}  // namespace

TruncatedSeries half_log(long p, int sign, long M, long prec, long K, HalfLogInfo* info) {
  if (M < 1) throw std::invalid_argument("half_log: M >= 1 required");
  long L = M > 1 ? flog(M - 1, p) : 0;
  PadicElement inv_p = PadicElement(p, p).inverse();
  auto index = [sign](long m) { return sign > 0 ? 2 * m : 2 * m - 1; };
  TruncatedSeries prod = TruncatedSeries::constant(inv_p, M);
  for (long m = 1;; ++m) {
    prod = prod * (cyclotomic(p, index(m), M) * inv_p);
    long bound = min_valuation(prod) + index(m + 1) - 2 - L;
    bool certified = bound >= prec;
    if ((K == 0 && certified) || m == K) {
      if (!certified)
        throw PrecisionError("half_log: cutoff K=" + std::to_string(K) +
                             " cannot certify precision " + std::to_string(prec));
      if (info) *info = {m, prec};
      return prod.with_prec(prec);
    }
  }
}

OrdLead ord_and_leading(const TruncatedSeries& f) {
  OrdLead r;
  for (long i = 0; i < f.trunc_order(); ++i) {
    if (!f[i].is_zero()) {
      r.decided = true;
      r.rho = i;
      r.lead = f[i];
      return r;
    }
  }
  r.rho = f.trunc_order();
  return r;
}

TruncatedSeries divide(const TruncatedSeries& f, const TruncatedSeries& g) {
  long M = std::min(f.trunc_order(), g.trunc_order());
  if (M == 0) return TruncatedSeries(f.p(), {});
  if (!g[0].valuation().decided())
    throw PrecisionError("divide: constant term of the divisor has undecided valuation");
  PadicElement g0inv = g[0].inverse();
  std::vector<PadicElement> h;
  for (long k = 0; k < M; ++k) {
    PadicElement s = f[k];
    for (long i = 0; i < k; ++i) s -= h[static_cast<size_t>(i)] * g[k - i];
    h.push_back(g[0].exact() ? s / g[0] : s * g0inv);
  }
  return TruncatedSeries(f.p(), std::move(h));
}

}  // namespace pmbsd
