#include "pmbsd/curve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace pmbsd {

namespace mp = boost::multiprecision;

Curve::Curve(long A1, long A2, long A3, long A4, long A6)
    : a1(A1), a2(A2), a3(A3), a4(A4), a6(A6) {
  b2 = a1 * a1 + 4 * a2;
  b4 = 2 * a4 + a1 * a3;
  b6 = a3 * a3 + 4 * a6;
  b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
  c4 = b2 * b2 - 24 * b4;
  c6 = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6;
  disc = -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
  if (disc == 0) throw std::invalid_argument("singular Weierstrass equation");
}

bool Curve::on_curve(const Point& P) const {
  if (P.inf) return true;
  const mpq_class &x = P.x, &y = P.y;
  return y * y + a1 * x * y + a3 * y == x * x * x + a2 * x * x + a4 * x + a6;
}

Point Curve::neg(const Point& P) const {
  if (P.inf) return P;
  return Point::at(P.x, -P.y - a1 * P.x - a3);
}

Point Curve::add(const Point& P, const Point& Q) const {
  if (P.inf) return Q;
  if (Q.inf) return P;
  mpq_class lam, nu;
  if (P.x == Q.x) {
    if (P.y + Q.y + a1 * Q.x + a3 == 0) return Point{};
    mpq_class den = 2 * P.y + a1 * P.x + a3;
    lam = (3 * P.x * P.x + 2 * a2 * P.x + a4 - a1 * P.y) / den;
    nu = (-P.x * P.x * P.x + a4 * P.x + 2 * a6 - a3 * P.y) / den;
  } else {
    mpq_class dx = Q.x - P.x;
    lam = (Q.y - P.y) / dx;
    nu = (P.y * Q.x - Q.y * P.x) / dx;
  }
  mpq_class x3 = lam * lam + a1 * lam - a2 - P.x - Q.x;
  mpq_class y3 = -(lam + a1) * x3 - nu - a3;
  return Point::at(x3, y3);
}

Point Curve::mul(const Point& P, long n) const {
  if (n < 0) return mul(neg(P), -n);
  Point r, b = P;
  while (n > 0) {
    if (n & 1) r = add(r, b);
    n >>= 1;
    if (n) b = add(b, b);
  }
  return r;
}

namespace {

long mod(const mpz_class& n, long m) {
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), n.get_mpz_t(), static_cast<unsigned long>(m));
  return r.get_si();
}

long inv_mod_l(long a, long m) {
  mpz_class r, A(a), M(m);
  if (mpz_invert(r.get_mpz_t(), A.get_mpz_t(), M.get_mpz_t()) == 0)
    throw std::domain_error("non-invertible residue");
  return r.get_si();
}

struct FPoint {
  bool inf = true;
  long x = 0, y = 0;
};

}  // namespace

long Curve::order_mod(const Point& P, long ell) const {
  if (P.inf) return 1;
  if (mod(mpz_class(P.x.get_den()), ell) == 0) return 1;
  long A1 = mod(a1, ell), A2 = mod(a2, ell), A3 = mod(a3, ell), A4 = mod(a4, ell),
       A6 = mod(a6, ell);
  auto red = [&](const mpq_class& q) {
    return mod(mpz_class(q.get_num()), ell) * inv_mod_l(mod(mpz_class(q.get_den()), ell), ell) % ell;
  };
  FPoint base{false, red(P.x), red(P.y)};
  auto add = [&](const FPoint& u, const FPoint& v) -> FPoint {
    if (u.inf) return v;
    if (v.inf) return u;
    long lam, nu;
    if (u.x == v.x) {
      long s = ((u.y + v.y + A1 * v.x + A3) % ell + ell) % ell;
      if (s == 0) return FPoint{};
      long den = ((2 * u.y + A1 * u.x + A3) % ell + ell) % ell;
      long num = ((3 * u.x % ell * u.x + 2 * A2 * u.x + A4 - A1 * u.y) % ell + ell) % ell;
      lam = num * inv_mod_l(den, ell) % ell;
      long num2 = ((-u.x * u.x % ell * u.x + A4 * u.x + 2 * A6 - A3 * u.y) % ell + ell) % ell;
      nu = num2 * inv_mod_l(den, ell) % ell;
    } else {
      long dx = ((v.x - u.x) % ell + ell) % ell, di = inv_mod_l(dx, ell);
      lam = ((v.y - u.y) % ell + ell) % ell * di % ell;
      nu = ((u.y * v.x - v.y * u.x) % ell + ell) % ell * di % ell;
    }
    long x3 = ((lam * lam + A1 * lam - A2 - u.x - v.x) % ell + ell) % ell;
    long y3 = ((-(lam + A1) * x3 - nu - A3) % ell + ell) % ell;
    return FPoint{false, x3, y3};
  };
  FPoint q = base;
  long bound = ell + 1 + 2 * static_cast<long>(std::sqrt(static_cast<double>(ell))) + 2;
  for (long n = 1; n <= bound; ++n) {
    if (q.inf) return n;
    q = add(q, base);
  }
  throw std::logic_error("order_mod: point order exceeds the Hasse bound");
}

long count_ap(const Curve& E, long ell) {
  if (mod(E.disc, ell) == 0) throw std::invalid_argument("count_ap: bad prime " + std::to_string(ell));
  long A1 = mod(E.a1, ell), A2 = mod(E.a2, ell), A3 = mod(E.a3, ell), A4 = mod(E.a4, ell),
       A6 = mod(E.a6, ell);
  if (ell == 2) {
    long n = 1;
    for (long x = 0; x < 2; ++x)
      for (long y = 0; y < 2; ++y)
        if ((y * y + A1 * x * y + A3 * y - x * x * x - A2 * x * x - A4 * x - A6) % 2 == 0) ++n;
    return 3 - n;
  }
  std::vector<signed char> chi(static_cast<size_t>(ell), -1);
  chi[0] = 0;
  for (long y = 1; y < ell; ++y) chi[static_cast<size_t>(y * y % ell)] = 1;
  // (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6, stepped by forward differences
  long B2 = mod(E.b2, ell), B4 = mod(E.b4, ell), B6 = mod(E.b6, ell);
  auto f = [&](long x) { return ((4 * x % ell * x % ell * x) + B2 * x % ell * x + 2 * B4 * x + B6) % ell; };
  long f0 = f(0), f1 = f(1 % ell), f2 = f(2 % ell), f3 = f(3 % ell);
  long d0 = f0, d1 = (f1 - f0 + ell) % ell, d2 = ((f2 - 2 * f1 + f0) % ell + 2 * ell) % ell;
  long d3 = ((f3 - 3 * f2 + 3 * f1 - f0) % ell + 3 * ell) % ell;
  long s = 0;
  for (long x = 0; x < ell; ++x) {
    s += chi[static_cast<size_t>(d0)];
    d0 += d1;
    if (d0 >= ell) d0 -= ell;
    d1 += d2;
    if (d1 >= ell) d1 -= ell;
    d2 += d3;
    if (d2 >= ell) d2 -= ell;
  }
  long ap = -s;
  if (ap * ap > 4 * ell) throw std::logic_error("Hasse bound violated");
  return ap;
}

std::vector<long> q_expansion(const Curve& E, long M, const std::map<long, long>& bad_ap) {
  std::vector<long> spf(static_cast<size_t>(M + 1), 0);
  std::vector<long> primes;
  for (long i = 2; i <= M; ++i) {
    if (spf[static_cast<size_t>(i)] == 0) {
      primes.push_back(i);
      for (long j = i; j <= M; j += i)
        if (spf[static_cast<size_t>(j)] == 0) spf[static_cast<size_t>(j)] = i;
    }
  }
  std::vector<long> ap(static_cast<size_t>(M + 1), 0);
  unsigned nt = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < nt; ++t) {
    pool.emplace_back([&, t] {
      for (size_t i = t; i < primes.size(); i += nt) {
        long l = primes[i];
        auto it = bad_ap.find(l);
        ap[static_cast<size_t>(l)] = it != bad_ap.end() ? it->second : count_ap(E, l);
      }
    });
  }
  for (auto& th : pool) th.join();
  std::vector<long> a(static_cast<size_t>(M + 1), 0);
  if (M >= 1) a[1] = 1;
  for (long n = 2; n <= M; ++n) {
    long l = spf[static_cast<size_t>(n)], pk = 1;
    long m = n;
    while (m % l == 0) {
      m /= l;
      pk *= l;
    }
    if (m > 1) {
      a[static_cast<size_t>(n)] = a[static_cast<size_t>(pk)] * a[static_cast<size_t>(m)];
    } else if (n == l) {
      a[static_cast<size_t>(n)] = ap[static_cast<size_t>(l)];
    } else if (bad_ap.count(l)) {
      a[static_cast<size_t>(n)] = ap[static_cast<size_t>(l)] * a[static_cast<size_t>(n / l)];
    } else {
      a[static_cast<size_t>(n)] = ap[static_cast<size_t>(l)] * a[static_cast<size_t>(n / l)] -
                                  l * a[static_cast<size_t>(n / l / l)];
    }
  }
  return a;
}

FormalExpansions formal_expansions(const Curve& E, long M) {
  if (M < 3) throw std::invalid_argument("formal_expansions: M >= 3 required");
  long ord = M + 3;
  mpq_class A1(E.a1), A2(E.a2), A3(E.a3), A4(E.a4), A6(E.a6);
  QSeries t = QSeries::monomial(1, 1, ord);
  QSeries w = QSeries::monomial(1, 3, ord);
  QSeries t3 = w;
  for (long it = 0; it < ord; ++it) {
    QSeries w2 = w * w;
    w = t3 + t * w * A1 + t * t * w * A2 + w2 * A3 + t * w2 * A4 + w2 * w * A6;
    w = w.truncate(ord);
  }
  FormalExpansions F;
  F.w = w;
  QSeries u = (w * QSeries::monomial(1, -3, ord)).truncate(M).inverse();  // t^3/w
  F.x = u * QSeries::monomial(1, -2, M);
  F.y = -(u * QSeries::monomial(1, -3, M));
  F.x = F.x.truncate(M - 2);
  F.y = F.y.truncate(M - 3);
  QSeries tt = QSeries::monomial(1, 1, M + 1);
  QSeries num = u * mpq_class(-2) + tt * u.derivative();
  QSeries den = u * mpq_class(-2) + tt * u * A1 + QSeries::monomial(A3, 3, M);
  F.f = (num * den.inverse()).truncate(M);
  F.z = F.f.integral();
  return F;
}

namespace {

Real agm(Real a, Real b, int digits) {
  Real eps = mp::pow(Real(10), -(digits + 5));
  for (int i = 0; i < 10000; ++i) {
    if (mp::abs(a - b) <= eps * mp::abs(a)) return a;
    Real an = (a + b) / 2;
    b = mp::sqrt(a * b);
    a = an;
  }
  throw std::runtime_error("AGM did not converge");
}

Real polish(Real x, const Real& A, const Real& B, const Real& C) {
  for (int i = 0; i < 60; ++i) {
    Real f = ((x + A) * x + B) * x + C;
    Real df = (3 * x + 2 * A) * x + B;
    if (df == 0) break;
    Real dx = f / df;
    x -= dx;
    if (dx == 0) break;
  }
  return x;
}

}  // namespace

Periods real_periods(const Curve& E, int digits) {
  if (digits < 30) throw std::invalid_argument("real_periods: digits >= 30 required");
  Real::default_precision(static_cast<unsigned>(digits + 15));
  Real pi = boost::math::constants::pi<Real>();
  // roots of 4x^3 + b2 x^2 + 2 b4 x + b6
  Real A = Real(E.b2.get_str()) / 4, B = Real(E.b4.get_str()) / 2, C = Real(E.b6.get_str()) / 4;
  Real p = B - A * A / 3, q = 2 * A * A * A / 27 - A * B / 3 + C;
  Periods P;
  if (E.disc > 0) {
    Real r = 2 * mp::sqrt(-p / 3);
    Real th = mp::acos(3 * q / (p * r)) / 3;
    std::vector<Real> e;
    for (int k = 0; k < 3; ++k) e.push_back(polish(r * mp::cos(th - 2 * pi * k / 3) - A / 3, A, B, C));
    std::sort(e.begin(), e.end(), [](const Real& u, const Real& v) { return u > v; });
    P.omega_plus = pi / agm(mp::sqrt(e[0] - e[2]), mp::sqrt(e[0] - e[1]), digits);
    P.omega_minus = pi / agm(mp::sqrt(e[0] - e[2]), mp::sqrt(e[1] - e[2]), digits);
  } else {
    Real d = mp::sqrt(q * q / 4 + p * p * p / 27);
    Real e1 = mp::cbrt(-q / 2 + d) + mp::cbrt(-q / 2 - d) - A / 3;
    e1 = polish(e1, A, B, C);
    Real a = 3 * e1 + A, b = mp::sqrt(3 * e1 * e1 + 2 * A * e1 + B);
    P.omega_plus = 2 * pi / agm(2 * mp::sqrt(b), mp::sqrt(2 * b + a), digits);
    P.omega_minus = pi / agm(2 * mp::sqrt(b), mp::sqrt(2 * b - a), digits);
  }
  return P;
}

std::map<long, long> CurveFixture::bad_ap() const {
  std::map<long, long> m;
  for (const auto& r : reduction_types)
    m[r.prime] = r.type == "split" ? 1 : (r.type == "nonsplit" ? -1 : 0);
  return m;
}

mpq_class parse_rational(const std::string& s) {
  mpq_class q(s);
  q.canonicalize();
  return q;
}

std::string rational_str(const mpq_class& q) { return q.get_str(); }

}  // namespace pmbsd
