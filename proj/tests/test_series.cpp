#include <gtest/gtest.h>

#include "pmbsd/series.hpp"

using namespace pmbsd;

TEST(Series, CyclotomicSmall) {
  auto f = cyclotomic(3, 1, 3);
  EXPECT_TRUE(f.same(TruncatedSeries::from_integers(3, {3, 3, 1})));
  auto g = cyclotomic(5, 2, 3);
  EXPECT_TRUE(g[1].agrees(PadicElement(5, 50)));
  for (long p : {5L, 7L})
    for (long n = 1; n <= 4; ++n) EXPECT_TRUE(cyclotomic(p, n, 4)[0].agrees(PadicElement(p, p)));
}

// p^2 X log^+ log^- = log(1+X) coefficientwise
TEST(Series, HalfLogsMultiplyToLog) {
  for (long p : {3L, 5L, 7L, 13L}) {
    const long M = 12, prec = 10;
    auto lp = half_log(p, +1, M, prec), lm = half_log(p, -1, M, prec);
    auto prod = lp * lm * PadicElement(p, p * p);
    for (long j = 0; j < M; ++j) {
      auto ref = PadicElement::rational(p, mpq_class(j % 2 ? -1 : 1, j + 1), prec);
      EXPECT_TRUE(prod[j].agrees(ref)) << "p=" << p << " j=" << j << " " << prod[j].str();
      EXPECT_GE(prod[j].prec(), prec - 2 * flog(M, p) - 2);
    }
    auto invp = PadicElement::rational(p, mpq_class(1, p), prec);
    EXPECT_TRUE(lp[0].agrees(invp));
    EXPECT_TRUE(lm[0].agrees(invp));
    for (long j = 1; j < M; ++j) {
      long b = -2 * (flog(j, p) + 1);
      EXPECT_GE((lp[j] * PadicElement(p, p)).valuation().bound2(), b);
      EXPECT_GE((lm[j] * PadicElement(p, p)).valuation().bound2(), b);
    }
  }
}

TEST(Series, HalfLogCutoffStable) {
  HalfLogInfo info;
  auto a = half_log(5, +1, 10, 12, 0, &info);
  auto b = half_log(5, +1, 10, 12, info.factors + 3);
  EXPECT_TRUE(a.agrees(b));
  EXPECT_THROW(half_log(5, +1, 10, 12, 1), PrecisionError);
}

TEST(Series, OrderAndLeading) {
  long p = 5;
  std::vector<PadicElement> c{PadicElement(p, 0, 6), PadicElement(p, 25, 6), PadicElement(p, 3, 6)};
  auto o = ord_and_leading(TruncatedSeries(p, c));
  ASSERT_TRUE(o.decided);
  EXPECT_EQ(o.rho, 1);
  EXPECT_TRUE(o.lead.agrees(PadicElement(p, 25)));
  std::vector<PadicElement> z{PadicElement(p, 0, 6), PadicElement(p, 125 * 5 * 25, 6)};
  auto u = ord_and_leading(TruncatedSeries(p, z));
  EXPECT_FALSE(u.decided);
  EXPECT_EQ(u.rho, 2);
}

TEST(Series, DivideRoundTrip) {
  long p = 7;
  auto f = TruncatedSeries::from_integers(p, {3, 1, 4, 1, 5, 9}).with_prec(20);
  auto g = TruncatedSeries::from_integers(p, {2, 7, 1, 8, 2, 8}).with_prec(20);
  auto q = divide(f, g);
  EXPECT_TRUE((q * g).agrees(f));
}

TEST(Series, ConjugateParts) {
  long p = 5;
  auto s = PadicElement::sqrt_minus_p(p, 10);
  auto f = TruncatedSeries::from_integers(p, {1, 2, 3}).with_prec(10) * s +
           TruncatedSeries::from_integers(p, {4, 5, 6}).with_prec(10);
  EXPECT_TRUE((f + f.conj()).agrees(TruncatedSeries::from_integers(p, {8, 10, 12})));
  EXPECT_TRUE((f.re() + f.im() * s).agrees(f));
}

// p log^- is not integral: Phi_1(1+X)/p has X^{p-1} coefficient 1/p
TEST(Series, HalfLogNotIntegral) {
  for (long p : {5L, 7L}) {
    auto lm = half_log(p, -1, p, 10);
    auto v = (lm[p - 1] * PadicElement(p, p)).valuation();
    ASSERT_TRUE(v.decided());
    EXPECT_EQ(v.twice, -2);
  }
}
