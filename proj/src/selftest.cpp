#include "pmbsd/selftest.hpp"

#include <random>
#include <sstream>

#include "pmbsd/dieudonne.hpp"

namespace pmbsd {

namespace {

template <class S>
bool eq(const S& a, const S& b) {
  if constexpr (std::is_same_v<S, QAlpha>)
    return a == b;
  else
    return a.agrees(b);
}

template <class S>
bool veq(const Vec2<S>& x, const Vec2<S>& y) {
  return eq(x.w, y.w) && eq(x.e, y.e);
}

template <class S>
S det(std::vector<std::vector<S>> m, const S& one, const S& zero) {
  size_t n = m.size();
  S d = one;
  for (size_t i = 0; i < n; ++i) {
    size_t piv = i;
    while (piv < n && ScalarOps<S>::is_zero(m[piv][i])) ++piv;
    if (piv == n) return zero;
    if (piv != i) {
      std::swap(m[piv], m[i]);
      d = -d;
    }
    d = d * m[i][i];
    for (size_t k = i + 1; k < n; ++k) {
      S f = m[k][i] / m[i][i];
      for (size_t j = i; j < n; ++j) m[k][j] = m[k][j] - f * m[i][j];
    }
  }
  return d;
}

// h_nu = a A + b B for nu = a omega + b eta, with A = -2 l l^T of rank one like h_omega
template <class S>
struct Synthetic {
  std::vector<std::vector<S>> A, B;
  S reg(const Dieudonne<S>& D, const Vec2<S>& nu) const {
    size_t r = A.size();
    std::vector<std::vector<S>> m(r, std::vector<S>(r, D.num(0)));
    for (size_t i = 0; i < r; ++i)
      for (size_t j = 0; j < r; ++j) m[i][j] = nu.w * A[i][j] + nu.e * B[i][j];
    return det(m, D.one(), D.num(0));
  }
};

template <class S>
struct Maker;
template <>
struct Maker<QAlpha> {
  long p, prec;
  QAlpha operator()(long n, long d = 1) const { return QAlpha(p, mpq_class(n, d)); }
};
template <>
struct Maker<PadicElement> {
  long p, prec;
  PadicElement operator()(long n, long d = 1) const { return PadicElement::rational(p, mpq_class(n, d), prec); }
};

template <class S>
void trial(long p, long prec, std::mt19937_64& rng, IdentityReport& rep) {
  std::uniform_int_distribution<long> dist(-40, 40);
  Maker<S> mk{p, prec};
  long vv;
  do vv = dist(rng);
  while (vv == 0 || vv % p == 0);
  long u0 = dist(rng) * p + dist(rng);
  S u = mk(u0), v = mk(vv);
  std::ostringstream tag;
  tag << "p=" << p << " u=" << u0 << " v=" << vv << ": ";
  auto check = [&](bool ok, const std::string& what) {
    ++rep.checks;
    if (!ok) rep.failures.push_back(tag.str() + what);
  };

  Dieudonne<S> D(p, u, v, mk(1));
  auto F = D.frobenius();
  auto F2 = F * F;
  S mip = -(D.one() / D.num(p));
  check(eq(F2.a, mip) && eq(F2.d, mip) && ScalarOps<S>::is_zero(F2.b) && ScalarOps<S>::is_zero(F2.c),
        "phi^2 = -1/p");
  check(eq(D.pair(D.phi(D.omega()), D.phi(D.eta())), D.pair(D.omega(), D.eta()) / D.num(p)), "pairing scaling");

  auto [na, nb] = D.eigenvectors();
  auto [ea, eb] = D.eta_basis();
  check(veq(D.phi(na), na.scale(D.one() / D.alpha())), "phi nu_alpha");
  check(veq(D.phi(nb), nb.scale(D.one() / D.beta())), "phi nu_beta");
  check(veq(D.phi(ea), ea.scale(D.one() / D.alpha())), "phi eta_alpha");
  check(eq(D.pair(ea, D.omega()), D.one()) && eq(D.pair(eb, D.omega()), D.one()), "[eta_*, omega] = 1");
  check(ScalarOps<S>::is_zero(D.pair(ea, na)) && ScalarOps<S>::is_zero(D.pair(eb, nb)), "[eta_a, nu_a] = 0");
  check(eq(D.pair(ea, nb), D.one()) && eq(D.pair(eb, na), D.one()), "[eta_a, nu_b] = 1");
  check(veq(na + nb, D.omega()), "nu_alpha + nu_beta = omega");

  Mat2<S> I{D.one(), D.num(0), D.num(0), D.one()};
  Mat2<S> T = I - F;
  S la = D.one() - D.one() / D.alpha(), lb = D.one() - D.one() / D.beta();
  check(veq((T * T).apply(na), na.scale(la * la)) && veq((T * T).apply(nb), nb.scale(lb * lb)),
        "(1-phi)^2 on the eigenbasis");

  auto [nm, np] = D.n_vectors();
  auto [mm, mp] = D.n_vectors_by_matrix();
  check(veq(mm.scale(D.num(p)), nm) && veq(mp.scale(D.num(p)), np), "closed forms of N_+-");
  S wb = D.pair(D.omega(), nb);
  check(eq(D.pair(D.omega(), nm), D.num(2) * D.alpha() * D.num(p - 1) / D.num(-p) * wb), "[omega, N_-] factor");
  check(eq(D.pair(D.omega(), np), D.num(4) / D.alpha() * wb), "[omega, N_+] factor");
  auto Z = D.z_log();
  check(eq(Z.a, D.one() / D.num(p)) && eq(Z.b, D.one() / D.num(p)) && eq(Z.c, D.alpha() / D.num(p)) &&
            eq(Z.d, D.beta() / D.num(p)),
        "Z_log");

  for (int r = 1; r <= 3; ++r) {
    Synthetic<S> H;
    std::vector<long> l(static_cast<size_t>(r));
    for (auto& x : l) x = dist(rng);
    size_t R = static_cast<size_t>(r);
    H.A.assign(R, std::vector<S>(R, D.num(0)));
    H.B.assign(R, std::vector<S>(R, D.num(0)));
    for (size_t i = 0; i < R; ++i)
      for (size_t j = 0; j < R; ++j) H.A[i][j] = D.num(-2 * l[i] * l[j]);
    for (size_t i = 0; i < R; ++i)
      for (size_t j = i; j < R; ++j) H.B[i][j] = H.B[j][i] = mk(dist(rng), 7);
    for (size_t i = 0; i < R; ++i) H.B[i][i] = H.B[i][i] + D.num(50);

    Vec2<S> x1 = D.eta(), x2 = D.omega() + D.eta().scale(D.num(3)), x3 = D.phi_omega();
    std::vector<std::pair<Vec2<S>, S>> vals{{x1, H.reg(D, x1)}, {x2, H.reg(D, x2)}, {x3, H.reg(D, x3)}};
    std::vector<S> res;
    Vec2<S> Rpr = D.reg_pr(vals, r, &res);
    check(res.size() == 1 && ScalarOps<S>::is_zero(res[0]), "Reg_PR residual r=" + std::to_string(r));
    auto [cp, cm] = D.modified_reg_coords(H.reg(D, np), H.reg(D, nm), r);
    auto [bp, bm] = D.brute_force_coords(Rpr);
    check(eq(cp, bp), "c_+ closed form vs brute force r=" + std::to_string(r));
    check(eq(cm, bm), "c_- closed form vs brute force r=" + std::to_string(r));
  }
}

}  // namespace

IdentityReport run_identity_suite(long p, int trials, long prec, std::uint64_t seed) {
  IdentityReport rep;
  rep.p = p;
  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    try {
      if (prec <= 0)
        trial<QAlpha>(p, prec, rng, rep);
      else
        trial<PadicElement>(p, prec, rng, rep);
    } catch (const std::exception& e) {
      rep.failures.push_back("p=" + std::to_string(p) + ": " + e.what());
    }
    ++rep.trials;
  }
  return rep;
}

}  // namespace pmbsd
