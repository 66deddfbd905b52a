// One line per acceptance criterion; exit status is the number of failed criteria.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "pmbsd/selftest.hpp"
#include "pmbsd/verifier.hpp"

using namespace pmbsd;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::vector<CurveFixture> load_all() {
  std::vector<std::string> paths;
  for (const auto& e : fs::directory_iterator(PMBSD_FIXTURES))
    if (e.path().extension() == ".json") paths.push_back(e.path().string());
  std::sort(paths.begin(), paths.end());
  std::vector<CurveFixture> out;
  for (const auto& p : paths) out.push_back(load_fixture(p));
  return out;
}

struct Run {
  VerificationReport rep;
  double seconds = 0;
};

std::map<std::string, Run> runs;

const Run& run_verify(const CurveFixture& fx) {
  auto it = runs.find(fx.label);
  if (it != runs.end()) return it->second;
  auto t0 = Clock::now();
  VerificationReport R = verify(fx);
  return runs[fx.label] = Run{R, since(t0)};
}

long p_part_valuation(const CurveFixture& fx) {
  mpq_class q(fx.sha_order * fx.tamagawa_product, fx.torsion_order * fx.torsion_order);
  q.canonicalize();
  return vp(q, fx.p);
}

struct Result {
  bool ok = true;
  std::ostringstream detail;
  void fail(const std::string& why) {
    if (ok) detail << "first failure: " << why << "; ";
    ok = false;
  }
};

Result c1() {
  Result r;
  auto t0 = Clock::now();
  long checks = 0;
  for (long p : {5L, 7L, 13L}) {
    IdentityReport rep = run_identity_suite(p, 20, 20, 1 + static_cast<std::uint64_t>(p));
    checks += rep.checks;
    if (rep.trials < 20) r.fail("too few trials at p=" + std::to_string(p));
    if (!rep.ok()) r.fail("p=" + std::to_string(p) + ": " + rep.failures.front());
  }
  double s = since(t0);
  if (s >= 10) r.fail("runtime");
  r.detail << checks << " residuals at N=20, " << s << " s (limit 10)";
  return r;
}

Result c2() {
  Result r;
  auto t0 = Clock::now();
  std::mt19937_64 rng(11);
  for (long p : {5L, 7L, 13L}) {
    for (long n = 1; n <= 6; ++n)
      if (!cyclotomic(p, n, 2)[0].same(PadicElement(p, p))) r.fail("Phi_n(1) at p=" + std::to_string(p));
    PadicElement invp = PadicElement::rational(p, mpq_class(1, p), 20);
    TruncatedSeries lp = half_log(p, 1, 10, 20), lm = half_log(p, -1, 10, 20);
    if (!lp[0].agrees(invp) || !lm[0].agrees(invp)) r.fail("half_log constant");
    PadicElement al = PadicElement::sqrt_minus_p(p);
    Dieudonne<PadicElement> D(p, PadicElement(p, 1), PadicElement(p, 1), PadicElement(p, 1));
    auto Z = D.z_log();
    std::vector<std::pair<PadicElement, PadicElement>> entries{
        {lp[0], Z.a}, {lp[0], Z.b}, {al * lm[0], Z.c}, {-al * lm[0], Z.d},
        {Z.a, invp}, {Z.b, invp}, {Z.c, invp * al}, {Z.d, -invp * al}};
    for (const auto& [x, y] : entries)
      if (!x.agrees(y)) r.fail("Z_log at p=" + std::to_string(p));
    const long N = 20, M = 10;
    std::vector<PadicElement> a, b;
    std::uniform_int_distribution<long> d(0, 1L << 40);
    for (long j = 0; j < M; ++j) {
      a.push_back(PadicElement(p, d(rng), N));
      b.push_back(PadicElement(p, d(rng), N));
    }
    SignedPair s{TruncatedSeries(p, a), TruncatedSeries(p, b)};
    auto [la, lb] = recombine(s, N + 4);
    SignedPair back = signed_decompose(la, lb, N + 4);
    for (long j = 0; j < M; ++j)
      if (!back.minus[j].with_prec(N - 2).agrees(a[j]) || !back.plus[j].with_prec(N - 2).agrees(b[j]) ||
          back.minus[j].prec() < N - 2 || back.plus[j].prec() < N - 2)
        r.fail("round trip at p=" + std::to_string(p) + " j=" + std::to_string(j));
  }
  double s = since(t0);
  if (s >= 5) r.fail("runtime");
  r.detail << "p in {5,7,13}, round trip mod p^18 to X^10, " << s << " s (limit 5)";
  return r;
}

Result c3(const std::vector<CurveFixture>& fxs) {
  Result r;
  double worst = 0;
  const long N = 20;
  auto close = [&](const PadicElement& x, const PadicElement& y, long k) {
    return x.with_prec(k).agrees(y.with_prec(k)) && std::min(x.prec(), y.prec()) >= k;
  };
  for (const auto& fx : fxs) {
    auto t0 = Clock::now();
    long p = fx.p;
    Curve E = fx.curve();
    QSeries sig = bernardi_sigma(E, 40);
    if (!sigma_residual(E, sig).is_zero()) r.fail("sigma residual " + fx.label);
    if (fx.rank > 0) {
      HeightContext ctx(fx, N);
      std::vector<Vec2<PadicElement>> nus{{PadicElement(p, 1), PadicElement(p, 0)},
                                          {PadicElement(p, 0), PadicElement(p, 1)},
                                          {PadicElement(p, 1), PadicElement(p, 1)}};
      for (const auto& P : fx.generators)
        for (const auto& v : nus) {
          PadicElement h1 = ctx.height(v, P);
          for (long n : {2L, 3L})
            if (!close(ctx.height(v, E.mul(P, n)), PadicElement(p, n * n) * h1, N - 2))
              r.fail("quadraticity " + fx.label);
        }
      const Point& P = fx.generators[0];
      std::vector<Point> pts{P, E.mul(P, 2)};
      for (const auto& T : fx.torsion_points) pts.push_back(E.add(P, T));
      for (const auto& v : nus) {
        Matrix G = ctx.gram(v, pts);
        for (size_t i = 0; i < pts.size(); ++i)
          for (size_t j = 0; j < pts.size(); ++j)
            if (!G[i][j].same(G[j][i])) r.fail("Gram symmetry " + fx.label);
        for (const auto& T : fx.torsion_points) {
          Point PT = E.add(P, T);
          if (PT.inf) continue;
          if (!close(ctx.height(v, PT), ctx.height(v, P), N - 2)) r.fail("torsion translation " + fx.label);
        }
      }
    }
    double s = since(t0);
    worst = std::max(worst, s);
    if (s >= 120) r.fail("runtime " + fx.label);
  }
  r.detail << fxs.size() << " curves, slowest " << worst << " s (limit 120)";
  return r;
}

Result c4(const std::vector<CurveFixture>& fxs) {
  Result r;
  int n = 0;
  double worst = 0;
  for (const auto& fx : fxs) {
    if (fx.rank != 0) continue;
    ++n;
    const Run& R = run_verify(fx);
    const auto& V = R.rep;
    worst = std::max(worst, R.seconds);
    if (V.outcome != Outcome::Pass) r.fail(fx.label + " outcome " + to_string(V.outcome));
    if (!V.order || V.order->rho != 0 || !V.order->rho_certified) r.fail(fx.label + " order");
    if (V.level < 2 || V.level > 3) r.fail(fx.label + " level");
    if (!V.series || V.series->plus[0].prec() < 2 || V.series->minus[0].prec() < 2)
      r.fail(fx.label + " precision");
    if (!V.leading || !V.rhs || V.leading->first.twice != V.rhs->first.twice ||
        V.leading->second.twice != V.rhs->second.twice)
      r.fail(fx.label + " valuations");
    if (R.seconds >= 300) r.fail(fx.label + " runtime");
    r.detail << fx.label << " v=" << (V.leading ? V.leading->first.str() : "?") << " ";
  }
  if (n < 2) r.fail("fewer than two rank-0 fixtures");
  r.detail << "slowest " << worst << " s (limit 300)";
  return r;
}

Result c5(const std::vector<CurveFixture>& fxs) {
  Result r;
  int n = 0;
  double worst = 0;
  for (const auto& fx : fxs) {
    if (fx.rank != 1) continue;
    ++n;
    const Run& R = run_verify(fx);
    const auto& V = R.rep;
    worst = std::max(worst, R.seconds);
    if (V.outcome != Outcome::Pass) r.fail(fx.label + " outcome " + to_string(V.outcome));
    if (!V.order || V.order->rho != 1 || !V.order->rho_certified) r.fail(fx.label + " order");
    if (!V.series || V.series->plus[1].prec() < 1 || V.series->minus[1].prec() < 1)
      r.fail(fx.label + " precision");
    if (!V.leading || !V.rhs || V.leading->first.twice != V.rhs->first.twice ||
        V.leading->second.twice != V.rhs->second.twice)
      r.fail(fx.label + " valuations");
    if (R.seconds >= 1800) r.fail(fx.label + " runtime");
    r.detail << fx.label << "@n=" << V.level << " (" << (V.leading ? V.leading->first.str() : "?") << ","
             << (V.leading ? V.leading->second.str() : "?") << ") ";
  }
  if (n < 1) r.fail("no rank-1 fixture");
  r.detail << "slowest " << worst << " s (limit 1800)";
  return r;
}

Result c6(const std::vector<CurveFixture>& fxs) {
  Result r;
  for (const auto& fx : fxs) {
    if (fx.rank != 0) continue;
    long p = fx.p;
    ModularSymbols ms(fx);
    mpq_class z = ms.plus(0);
    Real ratio = central_value_ratio(fx, 40);
    Real zr = Real(z.get_num().get_str()) / Real(z.get_den().get_str());
    if (abs(ratio - zr) > Real("1e-30")) r.fail(fx.label + " [0]^+ vs L(E,1)/Omega");
    PadicElement al = PadicElement::sqrt_minus_p(p), one(p, 1);
    PadicElement e = one - one / al;
    for (long n = 2; n <= 3; ++n) {
      TruncatedSeries L = lp_series(ms, p, n, 2);
      PadicElement want = (e * e * PadicElement::rational(p, z, 60)).with_prec2(L[0].prec2());
      if (!L[0].agrees(want)) r.fail(fx.label + " n=" + std::to_string(n));
      if (n == 2) r.detail << fx.label << " to p^" << L[0].prec() << " ";
    }
  }
  return r;
}

Result c7(const std::vector<CurveFixture>& fxs) {
  Result r;
  long coeffs = 0;
  for (const auto& fx : fxs) {
    const auto& V = run_verify(fx).rep;
    if (!V.series) {
      r.fail(fx.label + " no series");
      continue;
    }
    for (const auto* s : {&V.series->plus, &V.series->minus})
      for (long j = 0; j < s->trunc_order(); ++j) {
        ++coeffs;
        if ((*s)[j].valuation().bound2() < 0) r.fail(fx.label + " X^" + std::to_string(j));
      }
  }
  r.detail << coeffs << " coefficients on " << fxs.size() << " curves";
  return r;
}

Result c8(const std::vector<CurveFixture>& fxs) {
  Result r;
  int flipped = 0;
  for (const auto& fx : fxs) {
    for (int k = 0; k < 3; ++k) {
      CurveFixture m = fx;
      (k == 0 ? m.sha_order : k == 1 ? m.tamagawa_product : m.torsion_order) *= m.p;
      VerificationReport V = verify(m);
      bool any = false;
      for (const auto& [name, o] : V.verdicts) any = any || o == Outcome::Fail;
      if (any) {
        ++flipped;
      } else {
        r.fail(fx.label + (k == 0 ? " sha" : k == 1 ? " tamagawa" : " torsion"));
      }
    }
  }
  r.detail << flipped << "/" << 3 * fxs.size() << " mutations detected";
  return r;
}

Result c9(const std::vector<CurveFixture>& fxs) {
  Result r;
  for (const auto& fx : fxs) {
    if (fx.rank != 0) continue;
    const auto& V = run_verify(fx).rep;
    if (!V.series) {
      r.fail(fx.label + " no series");
      continue;
    }
    mpz_class want = ipow(fx.p, std::max(0L, p_part_valuation(fx)));
    for (const auto* s : {&V.series->plus, &V.series->minus}) {
      mpz_class got;
      try {
        got = euler_char((*s)[0]);
      } catch (const std::exception& e) {
        r.fail(fx.label + " " + e.what());
        continue;
      }
      if (got != want || p_part_valuation(fx) < 0) r.fail(fx.label);
    }
    r.detail << fx.label << " " << want.get_str() << " ";
  }
  return r;
}

}  // namespace

int main() {
  std::vector<CurveFixture> fxs = load_all();
  std::vector<std::pair<std::string, std::function<Result()>>> crit{
      {"identity suite", [] { return c1(); }},
      {"logarithm matrix", [] { return c2(); }},
      {"heights", [&] { return c3(fxs); }},
      {"rank 0 end-to-end", [&] { return c4(fxs); }},
      {"rank 1 end-to-end", [&] { return c5(fxs); }},
      {"interpolation", [&] { return c6(fxs); }},
      {"integrality", [&] { return c7(fxs); }},
      {"mutation sensitivity", [&] { return c8(fxs); }},
      {"Euler characteristic", [&] { return c9(fxs); }},
  };
  int failed = 0;
  for (size_t i = 0; i < crit.size(); ++i) {
    auto t0 = Clock::now();
    Result r;
    try {
      r = crit[i].second();
    } catch (const std::exception& e) {
      r.fail(std::string("exception: ") + e.what());
    }
    failed += !r.ok;
    std::printf("criterion %zu %-22s %s  [%.1f s] %s\n", i + 1, crit[i].first.c_str(), r.ok ? "PASS" : "FAIL",
                since(t0), r.detail.str().c_str());
    std::fflush(stdout);
  }
  return failed;
}
