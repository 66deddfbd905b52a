#pragma once

#include <gmpxx.h>

#include <climits>
#include <stdexcept>
#include <string>

namespace pmbsd {

struct PrecisionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Valuation in units of 1/2 so that v(sqrt(-p)) = 1/2 is representable.
struct Valuation {
  enum Kind { Exact, AtLeast, Infinite };
  Kind kind = Infinite;
  long twice = 0;

  bool decided() const { return kind == Exact; }
  // lower bound (value itself when decided)
  long bound2() const { return kind == Infinite ? LONG_MAX / 4 : twice; }
  std::string str() const;
};

enum class Verdict { Equal, Unequal, Undecidable };
const char* to_string(Verdict v);

// x = p^e (a + b s), s^2 = -p, known modulo p^P * Z_p[s] where P = prec2/2.
class PadicElement {
 public:
  static constexpr long kExact = LONG_MAX / 8;

  PadicElement() = default;
  PadicElement(long p, const mpz_class& n, long prec = kExact);

  static PadicElement rational(long p, const mpq_class& q, long prec);
  static PadicElement quadratic(long p, const mpq_class& a, const mpq_class& b, long prec2);
  static PadicElement zero(long p, long prec = kExact, bool ext = false);
  static PadicElement sqrt_minus_p(long p, long prec = kExact);
  static PadicElement from_parts(long p, const mpz_class& a, const mpz_class& b, long e,
                                 long prec2, bool ext);

  long p() const { return p_; }
  bool is_extension() const { return ext_; }
  bool exact() const { return prec2_ >= 2 * kExact; }
  long prec2() const { return prec2_; }
  // integer part of the absolute precision (floor)
  long prec() const { return exact() ? kExact : floor_half(prec2_); }

  Valuation valuation() const;
  bool is_zero() const { return a_ == 0 && b_ == 0; }

  PadicElement re() const;
  PadicElement im() const;
  PadicElement conj() const;
  PadicElement as_extension() const;
  // projection to Q_p, asserting the s-coordinate vanishes at precision
  PadicElement to_qp() const;
  PadicElement with_prec2(long prec2) const;
  PadicElement with_prec(long prec) const { return with_prec2(2 * prec); }

  PadicElement operator-() const;
  PadicElement operator+(const PadicElement& o) const;
  PadicElement operator-(const PadicElement& o) const;
  PadicElement operator*(const PadicElement& o) const;
  PadicElement operator/(const PadicElement& o) const;
  PadicElement& operator+=(const PadicElement& o) { return *this = *this + o; }
  PadicElement& operator-=(const PadicElement& o) { return *this = *this - o; }
  PadicElement& operator*=(const PadicElement& o) { return *this = *this * o; }
  PadicElement& operator/=(const PadicElement& o) { return *this = *this / o; }
  // inverse to the given relative precision when this element is exact
  PadicElement inverse(long rel_prec = 64) const;

  // rational coordinates (denominators are powers of p)
  mpq_class coord_a() const;
  mpq_class coord_b() const;
  // residue of a Z_p element modulo p^k, requires non-negative valuation
  mpz_class residue(long k) const;

  // same value and precision
  bool same(const PadicElement& o) const;
  // difference indistinguishable from zero at the joint precision
  bool agrees(const PadicElement& o) const { return (*this - o).is_zero(); }

  std::string str() const;
  static PadicElement parse(const std::string& s);

  static long floor_half(long t) { return t >= 0 ? t / 2 : -((-t + 1) / 2); }
  static long ceil_half(long t) { return -floor_half(-t); }

 private:
  void normalize();
  static void strip(long p, mpz_class& a, mpz_class& b, long& e);

  long p_ = 0;
  mpz_class a_, b_;
  long e_ = 0;
  long prec2_ = 2 * kExact;
  bool ext_ = false;
};

inline PadicElement operator*(long k, const PadicElement& x) { return PadicElement(x.p(), k) * x; }

long vp(const mpz_class& n, long p);
long vp(const mpq_class& q, long p);
mpz_class ipow(long p, long k);
long flog(long n, long p);  // floor(log_p n), n >= 1

PadicElement pow(const PadicElement& x, long n);
Verdict unit_equal(const PadicElement& x, const PadicElement& y);

// Iwasawa logarithm on 1 + pZ_p.  prec_cap bounds the work for exact input.
PadicElement iwasawa_log(const PadicElement& u, long prec_cap = 0);
// log_p on Z_p^x, via log(u^{p-1})/(p-1)
PadicElement log_unit(const PadicElement& u, long prec_cap = 0);
// log_p(kappa) with kappa = 1 + p
PadicElement log_kappa(long p, long prec);

}  // namespace pmbsd
