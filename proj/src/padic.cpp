#include "pmbsd/padic.hpp"

#include <algorithm>
#include <regex>
#include <sstream>

namespace pmbsd {

namespace {

void require_same_prime(long p, long q) {
  if (p != q) throw std::invalid_argument("p-adic operands over different primes");
}

long add_sat(long a, long b) {
  if (a >= 2 * PadicElement::kExact) return a;
  long s = a + b;
  return std::min(s, 2 * PadicElement::kExact);
}

mpz_class mod_pk(const mpz_class& n, long p, long k) {
  if (k <= 0) return 0;
  mpz_class m = ipow(p, k), r;
  mpz_fdiv_r(r.get_mpz_t(), n.get_mpz_t(), m.get_mpz_t());
  return r;
}

mpz_class inv_mod(const mpz_class& n, const mpz_class& m) {
  mpz_class r;
  if (mpz_invert(r.get_mpz_t(), n.get_mpz_t(), m.get_mpz_t()) == 0)
    throw std::domain_error("non-invertible residue");
  return r;
}

std::string coord_str(const mpq_class& q, long p) {
  if (q.get_den() == 1) return q.get_num().get_str();
  long k = vp(mpz_class(q.get_den()), p);
  return q.get_num().get_str() + "/" + std::to_string(p) + "^" + std::to_string(k);
}

}  // namespace

std::string Valuation::str() const {
  auto half = [](long t) {
    std::string s = (t < 0 ? "-" : "") + std::to_string(std::labs(t) / 2);
    if (t & 1) s += ".5";
    return s;
  };
  switch (kind) {
    case Exact: return half(twice);
    case AtLeast: return ">=" + half(twice);
    default: return "inf";
  }
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Equal: return "equal-up-to-unit";
    case Verdict::Unequal: return "unequal";
    default: return "undecidable";
  }
}

mpz_class ipow(long p, long k) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
  return r;
}

long vp(const mpz_class& n, long p) {
  if (n == 0) return LONG_MAX / 4;
  mpz_class t = n, q, r;
  long v = 0;
  while (true) {
    mpz_fdiv_qr_ui(q.get_mpz_t(), r.get_mpz_t(), t.get_mpz_t(), static_cast<unsigned long>(p));
    if (r != 0) break;
    t = q;
    ++v;
  }
  return v;
}

long vp(const mpq_class& q, long p) {
  if (q == 0) return LONG_MAX / 4;
  return vp(mpz_class(q.get_num()), p) - vp(mpz_class(q.get_den()), p);
}

long flog(long n, long p) {
  long k = 0;
  for (long m = p; m <= n; m *= p) ++k;
  return k;
}

PadicElement::PadicElement(long p, const mpz_class& n, long prec) {
  *this = from_parts(p, n, 0, 0, prec >= kExact ? 2 * kExact : 2 * prec, false);
}

PadicElement PadicElement::from_parts(long p, const mpz_class& a, const mpz_class& b, long e,
                                      long prec2, bool ext) {
  if (p < 3 || p % 2 == 0) throw std::invalid_argument("p must be an odd prime");
  PadicElement x;
  x.p_ = p;
  x.a_ = a;
  x.b_ = ext ? b : mpz_class(0);
  x.e_ = e;
  x.prec2_ = std::min(prec2, 2 * kExact);
  x.ext_ = ext;
  x.normalize();
  return x;
}

PadicElement PadicElement::zero(long p, long prec, bool ext) {
  return from_parts(p, 0, 0, 0, prec >= kExact ? 2 * kExact : 2 * prec, ext);
}

PadicElement PadicElement::sqrt_minus_p(long p, long prec) {
  return from_parts(p, 0, 1, 0, prec >= kExact ? 2 * kExact : 2 * prec, true);
}

PadicElement PadicElement::rational(long p, const mpq_class& q, long prec) {
  return quadratic(p, q, 0, prec >= kExact ? 2 * kExact : 2 * prec).re();
}

PadicElement PadicElement::quadratic(long p, const mpq_class& a, const mpq_class& b, long prec2) {
  bool exact = prec2 >= 2 * kExact;
  long ka = vp(mpz_class(a.get_den()), p), kb = vp(mpz_class(b.get_den()), p);
  long k = std::max(ka, kb);
  mpz_class pk = ipow(p, k);
  mpz_class da = a.get_den() / ipow(p, ka), db = b.get_den() / ipow(p, kb);
  // p^k * a, p^k * b with p-free denominators da, db
  mpz_class na = a.get_num() * ipow(p, k - ka), nb = b.get_num() * ipow(p, k - kb);
  if (exact) {
    if (da != 1 || db != 1)
      throw std::invalid_argument("exact p-adic element needs a p-power denominator");
    return from_parts(p, na, nb, -k, prec2, true);
  }
  long need = ceil_half(prec2) + k + 2;
  mpz_class m = ipow(p, std::max(need, 1L));
  na = na * inv_mod(da, m);
  nb = nb * inv_mod(db, m);
  return from_parts(p, na, nb, -k, prec2, true);
}

void PadicElement::strip(long p, mpz_class& a, mpz_class& b, long& e) {
  if (a == 0 && b == 0) return;
  long k = std::min(vp(a, p), vp(b, p));
  if (k > 0) {
    mpz_class pk = ipow(p, k);
    a /= pk;
    b /= pk;
    e += k;
  }
}

void PadicElement::normalize() {
  if (!ext_) {
    b_ = 0;
    if (!exact() && (prec2_ & 1)) prec2_ += 1;
  }
  if (exact()) {
    prec2_ = 2 * kExact;
    if (a_ == 0 && b_ == 0) e_ = 0;
    strip(p_, a_, b_, e_);
    return;
  }
  while (true) {
    if (a_ == 0 && b_ == 0) {
      e_ = 0;
      return;
    }
    strip(p_, a_, b_, e_);
    bool a_unit = a_ != 0 && vp(a_, p_) == 0;
    long ka = ceil_half(prec2_) - e_, kb = floor_half(prec2_) - e_;
    a_ = mod_pk(a_, p_, ka);
    b_ = mod_pk(b_, p_, kb);
    if (a_unit ? ka > 0 : kb > 0) return;
  }
}

Valuation PadicElement::valuation() const {
  if (is_zero()) {
    if (exact()) return {Valuation::Infinite, 0};
    return {Valuation::AtLeast, prec2_};
  }
  bool a_unit = a_ != 0 && vp(a_, p_) == 0;
  return {Valuation::Exact, 2 * e_ + (a_unit ? 0 : 1)};
}

PadicElement PadicElement::re() const {
  long pr = exact() ? 2 * kExact : 2 * ceil_half(prec2_);
  return from_parts(p_, a_, 0, e_, pr, false);
}

PadicElement PadicElement::im() const {
  long pr = exact() ? 2 * kExact : 2 * floor_half(prec2_);
  return from_parts(p_, b_, 0, e_, pr, false);
}

PadicElement PadicElement::conj() const { return from_parts(p_, a_, -b_, e_, prec2_, ext_); }

PadicElement PadicElement::as_extension() const {
  return from_parts(p_, a_, b_, e_, prec2_, true);
}

PadicElement PadicElement::to_qp() const {
  if (!ext_) return *this;
  if (b_ != 0) throw PrecisionError("element has a nonzero sqrt(-p) coordinate: " + str());
  return re();
}

PadicElement PadicElement::with_prec2(long prec2) const {
  if (prec2 >= prec2_) return *this;
  return from_parts(p_, a_, b_, e_, prec2, ext_);
}

PadicElement PadicElement::operator-() const { return from_parts(p_, -a_, -b_, e_, prec2_, ext_); }

PadicElement PadicElement::operator+(const PadicElement& o) const {
  require_same_prime(p_, o.p_);
  long e = std::min(e_, o.e_);
  mpz_class s1 = ipow(p_, e_ - e), s2 = ipow(p_, o.e_ - e);
  return from_parts(p_, a_ * s1 + o.a_ * s2, b_ * s1 + o.b_ * s2, e,
                    std::min(prec2_, o.prec2_), ext_ || o.ext_);
}

PadicElement PadicElement::operator-(const PadicElement& o) const { return *this + (-o); }

PadicElement PadicElement::operator*(const PadicElement& o) const {
  require_same_prime(p_, o.p_);
  bool ext = ext_ || o.ext_;
  Valuation v1 = valuation(), v2 = o.valuation();
  if ((v1.kind == Valuation::Infinite) || (v2.kind == Valuation::Infinite))
    return zero(p_, kExact, ext);
  long pr = std::min(add_sat(prec2_, v2.bound2()), add_sat(o.prec2_, v1.bound2()));
  mpz_class a = a_ * o.a_ - p_ * b_ * o.b_;
  mpz_class b = a_ * o.b_ + b_ * o.a_;
  return from_parts(p_, a, b, e_ + o.e_, pr, ext);
}

PadicElement PadicElement::inverse(long rel_prec) const {
  Valuation v = valuation();
  if (!v.decided()) throw PrecisionError("division by an element indistinguishable from zero");
  if (exact() && b_ == 0 && (a_ == 1 || a_ == -1)) return from_parts(p_, a_, 0, -e_, prec2_, ext_);
  long res2 = exact() ? -v.twice + 2 * rel_prec : prec2_ - 2 * v.twice;
  mpz_class n = a_ * a_ + p_ * b_ * b_;
  long vn = vp(n, p_);
  mpz_class n0 = n / ipow(p_, vn);
  long eres = -e_ - vn;
  long k = std::max(ceil_half(res2) - eres + 2, 1L);
  mpz_class m = ipow(p_, k);
  mpz_class inv = inv_mod(n0, m);
  return from_parts(p_, a_ * inv, -b_ * inv, eres, res2, ext_);
}

PadicElement PadicElement::operator/(const PadicElement& o) const {
  require_same_prime(p_, o.p_);
  Valuation vx = valuation();
  if (vx.kind == Valuation::Infinite) {
    if (!o.valuation().decided()) throw PrecisionError("division by zero");
    return zero(p_, kExact, ext_ || o.ext_);
  }
  long rel = 64;
  if (!exact()) rel = ceil_half(prec2_ - vx.bound2()) + 2;
  return *this * o.inverse(rel);
}

mpq_class PadicElement::coord_a() const {
  mpq_class q(a_);
  if (e_ >= 0) q *= ipow(p_, e_); else q /= ipow(p_, -e_);
  q.canonicalize();
  return q;
}

mpq_class PadicElement::coord_b() const {
  mpq_class q(b_);
  if (e_ >= 0) q *= ipow(p_, e_); else q /= ipow(p_, -e_);
  q.canonicalize();
  return q;
}

mpz_class PadicElement::residue(long k) const {
  if (ext_ && b_ != 0) throw std::domain_error("residue of an extension element");
  mpq_class q = coord_a();
  if (vp(mpz_class(q.get_den()), p_) > 0) throw std::domain_error("residue of a non-integral element");
  mpz_class m = ipow(p_, k);
  return mod_pk(q.get_num() * inv_mod(q.get_den(), m), p_, k);
}

bool PadicElement::same(const PadicElement& o) const {
  return p_ == o.p_ && ext_ == o.ext_ && prec2_ == o.prec2_ && e_ == o.e_ && a_ == o.a_ &&
         b_ == o.b_;
}

std::string PadicElement::str() const {
  std::ostringstream os;
  os << coord_str(coord_a(), p_);
  if (ext_) os << " + " << coord_str(coord_b(), p_) << "*s";
  os << " mod " << p_ << "^";
  if (exact()) {
    os << "inf";
  } else {
    if (prec2_ < 0) os << "-";
    os << std::labs(prec2_) / 2;
    if (prec2_ & 1) os << ".5";
  }
  return os.str();
}

PadicElement PadicElement::parse(const std::string& s) {
  static const std::regex re(
      R"(^\s*(-?\d+)(?:/(\d+)\^(\d+))?(?:\s*\+\s*(-?\d+)(?:/(\d+)\^(\d+))?\*s)?\s+mod\s+(\d+)\^(inf|-?\d+(?:\.5)?)\s*$)");
  std::smatch m;
  if (!std::regex_match(s, m, re)) throw std::invalid_argument("malformed p-adic string: " + s);
  long p = std::stol(m[7]);
  auto coord = [&](int i) {
    mpq_class q(mpz_class(m[i].str()));
    if (m[i + 1].matched) {
      if (std::stol(m[i + 1]) != p) throw std::invalid_argument("denominator prime mismatch: " + s);
      q /= ipow(p, std::stol(m[i + 2]));
    }
    q.canonicalize();
    return q;
  };
  mpq_class a = coord(1);
  bool ext = m[4].matched;
  mpq_class b = ext ? coord(4) : mpq_class(0);
  long prec2;
  std::string ps = m[8];
  if (ps == "inf") {
    prec2 = 2 * kExact;
  } else {
    bool half = ps.find(".5") != std::string::npos;
    bool neg = ps[0] == '-';
    long whole = std::labs(std::stol(ps.substr(0, ps.find('.'))));
    prec2 = 2 * whole + (half ? 1 : 0);
    if (neg) prec2 = -prec2;
  }
  PadicElement x = quadratic(p, a, b, prec2);
  if (!ext) x = x.re();
  return x;
}

PadicElement pow(const PadicElement& x, long n) {
  if (n < 0) return pow(x, -n).inverse();
  PadicElement r(x.p(), 1);
  if (x.is_extension()) r = r.as_extension();
  PadicElement b = x;
  while (n > 0) {
    if (n & 1) r *= b;
    n >>= 1;
    if (n) b *= b;
  }
  return r;
}

Verdict unit_equal(const PadicElement& x, const PadicElement& y) {
  Valuation a = x.valuation(), b = y.valuation();
  if (a.decided() && b.decided()) return a.twice == b.twice ? Verdict::Equal : Verdict::Unequal;
  if (a.decided() && b.bound2() > a.twice) return Verdict::Unequal;
  if (b.decided() && a.bound2() > b.twice) return Verdict::Unequal;
  if (a.kind == Valuation::Infinite && b.kind == Valuation::Infinite) return Verdict::Equal;
  return Verdict::Undecidable;
}

PadicElement iwasawa_log(const PadicElement& u, long prec_cap) {
  if (u.is_extension()) throw std::invalid_argument("iwasawa_log: argument must lie in Q_p");
  long p = u.p();
  long N = u.exact() ? prec_cap : (prec_cap > 0 ? std::min(u.prec(), prec_cap) : u.prec());
  if (N <= 0 || N >= PadicElement::kExact)
    throw std::invalid_argument("iwasawa_log: exact input needs a precision cap");
  PadicElement x = u - PadicElement(p, 1);
  Valuation vx = x.valuation();
  if (vx.kind != Valuation::Exact) return PadicElement::zero(p, N);
  if (vx.twice < 2) throw std::domain_error("iwasawa_log: argument not in 1 + pZ_p");
  long v = vx.twice / 2;
  if (v >= N) return PadicElement::zero(p, N);
  mpz_class mod = ipow(p, N);
  mpz_class x0 = x.with_prec(N).residue(N) / ipow(p, v);
  mpz_class xk = 1, sum = 0;
  for (long k = 1;; ++k) {
    long vk = vp(mpz_class(k), p);
    long ex = k * v - vk;
    if (k * v - flog(k, p) >= N) break;
    xk = (xk * x0) % mod;
    if (ex >= N) continue;
    mpz_class ku = mpz_class(k) / ipow(p, vk);
    mpz_class t = xk * ipow(p, ex) * inv_mod(ku, mod);
    if (k % 2 == 0) t = -t;
    sum += t;
  }
  return PadicElement(p, sum, N);
}

PadicElement log_unit(const PadicElement& u, long prec_cap) {
  Valuation v = u.valuation();
  if (!v.decided() || v.twice != 0 || u.is_extension())
    throw std::domain_error("log_unit: argument must be a unit of Z_p");
  long p = u.p();
  PadicElement w = u;
  if (u.exact()) {
    if (prec_cap <= 0) throw std::invalid_argument("log_unit: exact input needs a precision cap");
    w = u.with_prec(prec_cap);
  }
  return iwasawa_log(pow(w, p - 1), prec_cap) / PadicElement(p, p - 1);
}

PadicElement log_kappa(long p, long prec) {
  return iwasawa_log(PadicElement(p, 1 + p, prec));
}

}  // namespace pmbsd
