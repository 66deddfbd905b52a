#include "pmbsd/lfunction.hpp"

#include <algorithm>
#include <future>
#include <stdexcept>
#include <thread>

namespace pmbsd {

namespace {

using i128 = __int128;
using u128 = unsigned __int128;

long powmod(long b, long e, long m) {
  u128 r = 1 % m, x = static_cast<u128>(((b % m) + m) % m);
  while (e > 0) {
    if (e & 1) r = r * x % m;
    x = x * x % m;
    e >>= 1;
  }
  return static_cast<long>(r);
}

// generates (Z/p^2)^x, hence every (Z/p^n)^x
long primitive_root_p2(long p) {
  std::vector<long> qs;
  long m = p - 1;
  for (long q = 2; q * q <= m; ++q)
    if (m % q == 0) {
      qs.push_back(q);
      while (m % q == 0) m /= q;
    }
  if (m > 1) qs.push_back(m);
  for (long g = 2;; ++g) {
    bool ok = g % p != 0;
    for (long q : qs) ok = ok && powmod(g, (p - 1) / q, p) != 1;
    if (ok && powmod(g, p - 1, p * p) != 1) return g;
  }
}

mpz_class to_mpz(i128 v) {
  bool neg = v < 0;
  u128 u = neg ? static_cast<u128>(-(v + 1)) + 1 : static_cast<u128>(v);
  mpz_class hi = static_cast<unsigned long>(u >> 64), lo = static_cast<unsigned long>(u);
  mpz_class r = (hi << 64) + lo;
  return neg ? mpz_class(-r) : r;
}

long word_digits(long p) {
  long K = 0;
  u128 q = 1;
  while (q * p < (static_cast<u128>(1) << 62)) {
    q *= p;
    ++K;
  }
  return K;
}

// l(a) = log_p(a)/log_p(1+p) mod p^K
long ell_residue(long p, long a, long K) {
  PadicElement x = log_unit(PadicElement(p, a, K + 4)) / log_kappa(p, K + 4);
  return x.residue(K).get_si();
}

struct Sums {
  std::vector<i128> s1, s2;
  explicit Sums(long M) : s1(static_cast<size_t>(M), 0), s2(static_cast<size_t>(M), 0) {}
};

// adds s*F_j(l) with F_j the falling factorial mod `mod`
inline void accumulate(Sums& acc, long s1, long s2, long l, long M, long mod) {
  u128 F = 1;
  for (long j = 0; j < M; ++j) {
    acc.s1[static_cast<size_t>(j)] += static_cast<i128>(s1) * static_cast<i128>(F);
    acc.s2[static_cast<size_t>(j)] += static_cast<i128>(s2) * static_cast<i128>(F);
    long f = l - j % mod;
    if (f < 0) f += mod;
    F = F * static_cast<u128>(f) % static_cast<u128>(mod);
  }
}

}  // namespace

long symbol_defect(const ModularSymbols& ms, long p) { return -vp(mpz_class(ms.scale()), p); }

long certified_prec2(long p, long n, long j, long d) { return n - 4 - 2 * flog(j, p) + 2 * d; }

long level_for(long p, long M, long prec, long d) {
  long f = M >= 2 ? flog(M - 1, p) : 0;
  return std::max(2L, 2 * prec + 4 + 2 * f - 2 * d);
}

QAlpha mu_alpha(const ModularSymbols& ms, long p, long a, long n, int root) {
  if (n < 1) throw std::invalid_argument("mu_alpha: level must be positive");
  QAlpha al = QAlpha::alpha(p) * QAlpha(p, root);
  QAlpha an(p, 1);
  for (long i = 0; i < n; ++i) an = an * al;
  mpz_class pn = ipow(p, n), pn1 = ipow(p, n - 1);
  mpq_class r1(mpz_class(a), pn), r2(mpz_class(a), pn1);
  r1.canonicalize();
  r2.canonicalize();
  return QAlpha(p, ms.plus(r1)) / an - QAlpha(p, ms.plus(r2)) / (an * al);
}

TruncatedSeries lp_series(const ModularSymbols& ms, long p, long n, long M, const LSeriesOptions& opt) {
  if (n < 2 || M < 1) throw std::invalid_argument("lp_series: need level >= 2 and M >= 1");
  if (opt.root != 1 && opt.root != -1) throw std::invalid_argument("lp_series: root must be +1 or -1");
  const long d = symbol_defect(ms, p);
  if (opt.certify && opt.min_prec > 0 && M >= 2 && certified_prec2(p, n, M - 1, d) < 2 * opt.min_prec) {
    long need = level_for(p, M, opt.min_prec, d);
    throw InsufficientLevel("level " + std::to_string(n) + " cannot certify precision " +
                                std::to_string(opt.min_prec) + "; need n = " + std::to_string(need),
                            need);
  }
  const long K = word_digits(p);
  const long mod = ipow(p, K).get_si();
  const long pn = ipow(p, n).get_si(), pn1 = pn / p;
  if (ipow(p, n) > mpz_class(1L << 40)) throw std::invalid_argument("lp_series: level too large");

  unsigned nt = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  Sums total(M);
  long weight = 1;

  if (opt.sampling == Sampling::Generator) {
    long g = primitive_root_p2(p);
    long lg = ell_residue(p, g, K);
    // [-r]^+ = [r]^+ and l(-a) = l(a): half the units, counted twice
    long half = pn1 * (p - 1) / 2;
    weight = 2;
    long chunk = (half + nt - 1) / nt;
    std::vector<std::future<Sums>> jobs;
    for (long k0 = 0; k0 < half; k0 += chunk) {
      long k1 = std::min(half, k0 + chunk);
      jobs.push_back(std::async(std::launch::async, [&, k0, k1] {
        Sums acc(M);
        long a = powmod(g, k0, pn);
        long l = static_cast<long>(static_cast<u128>(k0) * static_cast<u128>(lg) % static_cast<u128>(mod));
        for (long k = k0; k < k1; ++k) {
          accumulate(acc, ms.plus_scaled(a, pn), ms.plus_scaled(a % pn1, pn1), l, M, mod);
          a = static_cast<long>(static_cast<u128>(a) * static_cast<u128>(g) % static_cast<u128>(pn));
          l += lg;
          if (l >= mod) l -= mod;
        }
        return acc;
      }));
    }
    for (auto& f : jobs) {
      Sums s = f.get();
      for (long j = 0; j < M; ++j) {
        total.s1[static_cast<size_t>(j)] += s.s1[static_cast<size_t>(j)];
        total.s2[static_cast<size_t>(j)] += s.s2[static_cast<size_t>(j)];
      }
    }
  } else {
    for (long a = 1; a < pn; ++a) {
      if (a % p == 0) continue;
      accumulate(total, ms.plus_scaled(a, pn), ms.plus_scaled(a % pn1, pn1), ell_residue(p, a, K), M, mod);
    }
  }

  // 1/alpha = -alpha/p
  PadicElement ainv = PadicElement::quadratic(p, 0, mpq_class(-opt.root, p), 2 * PadicElement::kExact);
  PadicElement c1 = pow(ainv, n), c2 = pow(ainv, n + 1);
  PadicElement D0(p, ms.scale());

  std::vector<PadicElement> out;
  long vj = 0;
  mpz_class fact = 1;
  for (long j = 0; j < M; ++j) {
    if (j > 0) {
      fact *= j;
      vj = vp(fact, p);
    }
    PadicElement S1, S2;
    if (j == 0) {
      S1 = PadicElement(p, to_mpz(total.s1[0] * weight));
      S2 = PadicElement(p, to_mpz(total.s2[0] * weight));
    } else {
      if (K - vj < 1) throw PrecisionError("lp_series: X-truncation too large for word arithmetic");
      mpz_class modz = mod, pv = ipow(p, vj), m2 = ipow(p, K - vj);
      mpz_class u = fact / pv;
      mpz_class ui;
      mpz_invert(ui.get_mpz_t(), u.get_mpz_t(), m2.get_mpz_t());
      auto reduce = [&](i128 v) {
        mpz_class x = to_mpz(v * weight);
        x %= modz;
        if (x < 0) x += modz;
        if (x % pv != 0) throw std::logic_error("lp_series: falling factorial not divisible by p^v");
        x = (x / pv) * ui % m2;
        return PadicElement(p, x, K - vj);
      };
      S1 = reduce(total.s1[static_cast<size_t>(j)]);
      S2 = reduce(total.s2[static_cast<size_t>(j)]);
    }
    PadicElement c = (c1 * S1 - c2 * S2) / D0;
    if (opt.certify && j > 0) c = c.with_prec2(certified_prec2(p, n, j, d));
    if (opt.certify && opt.min_prec > 0 && j > 0 && c.prec2() < 2 * opt.min_prec)
      throw PrecisionError("lp_series: word-size arithmetic cannot reach the requested precision");
    out.push_back(c.as_extension());
  }
  return TruncatedSeries(p, std::move(out));
}

namespace {

long working_prec(const TruncatedSeries& a, const TruncatedSeries& b) {
  long best = 4;
  for (const auto* s : {&a, &b})
    for (const auto& c : s->coeffs())
      if (!c.exact()) best = std::max(best, c.prec() + 3);
  return std::min(best, 200L);
}

}  // namespace

SignedPair signed_decompose(const TruncatedSeries& la, const TruncatedSeries& lb, long prec) {
  if (la.p() != lb.p()) throw std::invalid_argument("signed_decompose: different primes");
  long p = la.p();
  long M = std::min(la.trunc_order(), lb.trunc_order());
  if (prec <= 0) prec = working_prec(la, lb);
  TruncatedSeries lp = half_log(p, 1, M, prec), lm = half_log(p, -1, M, prec);
  PadicElement al = PadicElement::sqrt_minus_p(p), be = -al;
  TruncatedSeries a = la.truncate(M), b = lb.truncate(M);
  TruncatedSeries plus = divide((a - b) * (PadicElement(p, 1) / (al - be)), lm);
  TruncatedSeries minus = divide((a * be - b * al) * (PadicElement(p, 1) / (be - al)), lp);
  for (const auto* s : {&plus, &minus})
    for (const auto& c : s->coeffs())
      if (!c.im().is_zero())
        throw std::invalid_argument("signed_decompose: L_beta is not the conjugate of L_alpha");
  return {minus.re(), plus.re()};
}

std::pair<TruncatedSeries, TruncatedSeries> recombine(const SignedPair& s, long prec) {
  long p = s.minus.p();
  long M = std::min(s.minus.trunc_order(), s.plus.trunc_order());
  if (prec <= 0) prec = working_prec(s.minus, s.plus);
  TruncatedSeries lp = half_log(p, 1, M, prec), lm = half_log(p, -1, M, prec);
  PadicElement al = PadicElement::sqrt_minus_p(p);
  TruncatedSeries m = s.minus.truncate(M) * lp, q = s.plus.truncate(M) * lm;
  return {m + q * al, m - q * al};
}

}  // namespace pmbsd
