#include <gtest/gtest.h>

#include <random>

#include "pmbsd/dieudonne.hpp"

using namespace pmbsd;

namespace {

template <class S>
bool eq(const S& a, const S& b) {
  if constexpr (std::is_same_v<S, QAlpha>)
    return a == b;
  else
    return a.agrees(b);
}

std::string dbg(const QAlpha& x) { return x.str(); }
std::string dbg(const PadicElement& x) { return x.str(); }

template <class S>
bool veq(const Vec2<S>& x, const Vec2<S>& y) {
  return eq(x.w, y.w) && eq(x.e, y.e);
}

// det of an r x r matrix over S by elimination without pivoting on zero
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

// height pairing h_nu = a*A + b*B for nu = a*omega + b*eta, A = -2 l l^T
template <class S>
struct SyntheticHeights {
  std::vector<std::vector<S>> A, B;
  S reg(const Dieudonne<S>& D, const Vec2<S>& nu) const {
    size_t r = A.size();
    std::vector<std::vector<S>> m(r, std::vector<S>(r, D.num(0)));
    for (size_t i = 0; i < r; ++i)
      for (size_t j = 0; j < r; ++j) m[i][j] = nu.w * A[i][j] + nu.e * B[i][j];
    return det(m, D.one(), D.num(0));
  }
};

struct Gen {
  std::mt19937_64 rng;
  long p;
  std::uniform_int_distribution<long> d{-40, 40};
  long next_nonzero_unit() {
    for (;;) {
      long x = d(rng);
      if (x != 0 && x % p != 0) return x;
    }
  }
};

template <class S>
S make(long p, long n, long d = 1);
template <>
QAlpha make<QAlpha>(long p, long n, long d) {
  return QAlpha(p, mpq_class(n, d));
}
template <>
PadicElement make<PadicElement>(long p, long n, long d) {
  return PadicElement::rational(p, mpq_class(n, d), 40);
}

template <class S>
void run_identities(long p, unsigned seed) {
  Gen g{std::mt19937_64(seed), p};
  S u = make<S>(p, g.d(g.rng) * p + g.d(g.rng)), v = make<S>(p, g.next_nonzero_unit());
  S gram = make<S>(p, 1);
  Dieudonne<S> D(p, u, v, gram);
  auto F = D.frobenius();
  auto F2 = F * F;
  S mip = -(D.one() / D.num(p));
  EXPECT_TRUE(eq(F2.a, mip) && eq(F2.d, mip) && ScalarOps<S>::is_zero(F2.b) && ScalarOps<S>::is_zero(F2.c));
  EXPECT_TRUE(eq(D.pair(D.phi(D.omega()), D.phi(D.eta())), D.pair(D.omega(), D.eta()) / D.num(p)));

  auto [na, nb] = D.eigenvectors();
  EXPECT_TRUE(veq(D.phi(na), na.scale(D.one() / D.alpha())));
  EXPECT_TRUE(veq(D.phi(nb), nb.scale(D.one() / D.beta())));
  auto [ea, eb] = D.eta_basis();
  EXPECT_TRUE(veq(D.phi(ea), ea.scale(D.one() / D.alpha())));
  EXPECT_TRUE(eq(D.pair(ea, D.omega()), D.one()));
  EXPECT_TRUE(eq(D.pair(eb, D.omega()), D.one()));
  EXPECT_TRUE(ScalarOps<S>::is_zero(D.pair(ea, na)));
  EXPECT_TRUE(ScalarOps<S>::is_zero(D.pair(eb, nb)));
  EXPECT_TRUE(eq(D.pair(ea, nb), D.one()));
  EXPECT_TRUE(eq(D.pair(eb, na), D.one()));
  EXPECT_TRUE(veq(na + nb, D.omega()));

  Mat2<S> I{D.one(), D.num(0), D.num(0), D.one()};
  Mat2<S> T = I - F;
  S la = D.one() - D.one() / D.alpha(), lb = D.one() - D.one() / D.beta();
  EXPECT_TRUE(veq((T * T).apply(na), na.scale(la * la)));
  EXPECT_TRUE(veq((T * T).apply(nb), nb.scale(lb * lb)));

  auto [nm, np] = D.n_vectors();
  auto [mm, mp] = D.n_vectors_by_matrix();
  EXPECT_TRUE(veq(mm.scale(D.num(p)), nm));
  EXPECT_TRUE(veq(mp.scale(D.num(p)), np));
  S wb = D.pair(D.omega(), nb);
  EXPECT_TRUE(eq(D.pair(D.omega(), nm), D.num(2) * D.alpha() * D.num(p - 1) / D.num(-p) * wb));
  EXPECT_TRUE(eq(D.pair(D.omega(), np), D.num(4) / D.alpha() * wb));
  EXPECT_FALSE(ScalarOps<S>::is_zero(D.pair(D.omega(), nm)));
  EXPECT_FALSE(ScalarOps<S>::is_zero(D.pair(D.omega(), np)));
  auto Z = D.z_log();
  EXPECT_TRUE(eq(Z.a, D.one() / D.num(p)) && eq(Z.b, D.one() / D.num(p)));
  EXPECT_TRUE(eq(Z.c, D.alpha() / D.num(p)) && eq(Z.d, D.beta() / D.num(p)));

  for (int r = 1; r <= 3; ++r) {
    SyntheticHeights<S> H;
    std::vector<long> l(r);
    for (auto& x : l) x = g.d(g.rng);
    H.A.assign(r, std::vector<S>(r, D.num(0)));
    H.B.assign(r, std::vector<S>(r, D.num(0)));
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) H.A[i][j] = D.num(-2 * l[i] * l[j]);
    for (int i = 0; i < r; ++i)
      for (int j = i; j < r; ++j) H.B[i][j] = H.B[j][i] = make<S>(p, g.d(g.rng), 7);
    for (int i = 0; i < r; ++i) H.B[i][i] = H.B[i][i] + D.num(50);

    Vec2<S> x1 = D.eta(), x2 = D.omega() + D.eta().scale(D.num(3)), x3 = D.phi_omega();
    std::vector<std::pair<Vec2<S>, S>> vals{{x1, H.reg(D, x1)}, {x2, H.reg(D, x2)}, {x3, H.reg(D, x3)}};
    std::vector<S> res;
    Vec2<S> R = D.reg_pr(vals, r, &res);
    ASSERT_EQ(res.size(), 1u);
    EXPECT_TRUE(ScalarOps<S>::is_zero(res[0])) << "r=" << r;

    auto [cp, cm] = D.modified_reg_coords(H.reg(D, np), H.reg(D, nm), r);
    auto [bp, bm] = D.brute_force_coords(R);
    EXPECT_TRUE(eq(cp, bp)) << "p=" << p << " r=" << r;
    EXPECT_TRUE(eq(cm, bm)) << "p=" << p << " r=" << r << " " << dbg(cm) << " vs " << dbg(bm) << " u=" << dbg(u) << " v=" << dbg(v);
  }
}

}  // namespace

TEST(Dieudonne, ExactIdentities) {
  for (long p : {5L, 7L, 13L})
    for (unsigned s = 0; s < 24; ++s) run_identities<QAlpha>(p, 100 * p + s);
}

TEST(Dieudonne, PadicIdentities) {
  for (long p : {5L, 7L, 13L})
    for (unsigned s = 0; s < 24; ++s) run_identities<PadicElement>(p, 200 * p + s);
}

TEST(Dieudonne, RejectsDegenerateFrobenius) {
  EXPECT_THROW(Dieudonne<QAlpha>(5, QAlpha(5, 1), QAlpha(5, 0), QAlpha(5, 1)), std::domain_error);
}

TEST(Dieudonne, RegPrNeedsTwoIndependentVectors) {
  Dieudonne<QAlpha> D(5, QAlpha(5, 2), QAlpha(5, 1), QAlpha(5, 1));
  auto w = D.eta();
  std::vector<std::pair<Vec2<QAlpha>, QAlpha>> vals{{w, QAlpha(5, 1)}, {w.scale(QAlpha(5, 2)), QAlpha(5, 2)}};
  EXPECT_THROW(D.reg_pr(vals, 1), std::domain_error);
}
