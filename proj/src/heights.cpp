#include "pmbsd/heights.hpp"

#include <algorithm>
#include <future>
#include <numeric>
#include <stdexcept>

namespace pmbsd {

QSeries bernardi_sigma(const Curve& E, long M) {
  if (M < 5) throw std::invalid_argument("bernardi_sigma: M >= 5 required");
  // x is known mod t^{K-2}; sigma ends up known mod t^{K-1}
  FormalExpansions F = formal_expansions(E, M + 2);
  mpq_class b2_12 = mpq_class(E.b2) / 12;
  QSeries zi = F.z.inverse();
  QSeries h = F.x + QSeries::constant(b2_12, F.x.order()) - zi * zi;
  QSeries Dg = -(h * F.f).integral();
  QSeries g = (Dg * F.f).integral();
  return (F.z * g.exp()).truncate(M + 1);
}

QSeries sigma_residual(const Curve& E, const QSeries& sigma) {
  long M = sigma.order() - 1;
  FormalExpansions F = formal_expansions(E, M);
  QSeries s1 = sigma.derivative() * (F.f * sigma).inverse();
  QSeries s2 = s1.derivative() * F.f.inverse();
  return s2 + F.x + QSeries::constant(mpq_class(E.b2) / 12, F.x.order());
}

PadicElement determinant(Matrix m) {
  size_t n = m.size();
  if (n == 0) throw std::invalid_argument("determinant of an empty matrix");
  long p = m[0][0].p();
  PadicElement d(p, 1);
  for (size_t i = 0; i < n; ++i) {
    size_t piv = n;
    long best = 0;
    for (size_t k = i; k < n; ++k) {
      Valuation v = m[k][i].valuation();
      if (v.decided() && (piv == n || v.twice < best)) {
        piv = k;
        best = v.twice;
      }
    }
    if (piv == n) {
      size_t worst = i;
      for (size_t k = i; k < n; ++k)
        if (m[k][i].prec2() < m[worst][i].prec2()) worst = k;
      return d * m[worst][i];
    }
    if (piv != i) {
      std::swap(m[piv], m[i]);
      d = -d;
    }
    d = d * m[i][i];
    for (size_t k = i + 1; k < n; ++k) {
      PadicElement f = m[k][i] / m[i][i];
      for (size_t j = i; j < n; ++j) m[k][j] = m[k][j] - f * m[i][j];
    }
  }
  return d;
}

Matrix strict_kernel(const std::vector<PadicElement>& logs) {
  size_t r = logs.size();
  size_t piv = r;
  for (size_t i = 0; i < r; ++i) {
    Valuation v = logs[i].valuation();
    if (v.decided() && (piv == r || v.twice < logs[piv].valuation().twice)) piv = i;
  }
  if (piv == r) throw PrecisionError("strict Mordell-Weil group: every formal logarithm is zero at precision");
  long p = logs[piv].p();
  Matrix K;
  for (size_t j = 0; j < r; ++j) {
    if (j == piv) continue;
    std::vector<PadicElement> row(r, PadicElement::zero(p));
    row[j] = PadicElement(p, 1);
    row[piv] = -(logs[j] / logs[piv]);
    K.push_back(row);
  }
  return K;
}

HeightContext::HeightContext(const CurveFixture& fx, long prec)
    : fx_(fx), E_(fx.curve()), p_(fx.p), prec_(prec) {
  if (prec < 1) throw std::invalid_argument("HeightContext: prec >= 1 required");
}

std::pair<std::shared_ptr<const QSeries>, std::shared_ptr<const QSeries>> HeightContext::series(
    long M) const {
  std::lock_guard<std::mutex> lock(mu_);
  if (!sigma_ || sigma_->order() < M + 1) {
    long K = std::max(M, sigma_ ? 2 * (sigma_->order() - 1) : 20L);
    sigma_ = std::make_shared<const QSeries>(bernardi_sigma(E_, K));
    z_ = std::make_shared<const QSeries>(formal_expansions(E_, K).z);
  }
  return {sigma_, z_};
}

long HeightContext::multiple(const Point& P) const {
  if (P.inf || E_.mul(P, fx_.torsion_order).inf)
    throw std::invalid_argument("height of a torsion point");
  long m = std::lcm(fx_.tamagawa_product, fx_.torsion_order);
  return std::lcm(m, E_.order_mod(P, p_));
}

HeightContext::Local HeightContext::local(const Point& P) const {
  Local L;
  L.m = multiple(P);
  Point Q = E_.mul(P, L.m);
  if (Q.inf) throw std::logic_error("multiple of a non-torsion point is the identity");
  mpz_class den = Q.x.get_den();
  if (!mpz_perfect_square_p(den.get_mpz_t())) throw std::logic_error("x-denominator is not a square");
  mpz_sqrt(L.d.get_mpz_t(), den.get_mpz_t());
  L.v = vp(L.d, p_);
  if (L.v < 1) throw std::logic_error("mP is not in the formal group at p");
  L.t = -Q.x / Q.y;
  return L;
}

// coefficient bounds: v(z_j) >= -log_p j, v(sigma_j) >= -(j-1)/(p-1) - 2 log_p j
long HeightContext::terms_needed(long v, long work, bool sigma) const {
  auto ok = [&](long j) {
    long lb = sigma ? -((j - 1) / (p_ - 1)) - 2 * flog(j, p_) : -flog(j, p_);
    return j * v + lb >= work;
  };
  long last_bad = 0;
  for (long j = 1; j <= 8 * (work + 8) * p_; ++j)
    if (!ok(j)) last_bad = j;
  return last_bad + 1;
}

namespace {

// sum_{j < J} c_j t^j at working precision
PadicElement eval_series(long p, const QSeries& s, const PadicElement& t, long J, long cap) {
  PadicElement acc = PadicElement::zero(p);
  PadicElement tj = PadicElement(p, 1);
  for (long j = 1; j < J; ++j) {
    tj = tj * t;
    mpq_class c = s.coeff(j);
    if (c == 0) continue;
    acc = acc + PadicElement::rational(p, c, cap) * tj;
  }
  return acc;
}

}  // namespace

PointHeights HeightContext::evaluate(const Local& L) const {
  long vm = vp(mpz_class(L.m), p_);
  long work = prec_ + L.v + 2 * vm + 3;
  long Jz = terms_needed(L.v, work, false), Js = terms_needed(L.v, work, true);
  auto [sig, z] = series(std::max(Jz, Js));
  long cap = work + std::max(Jz, Js);
  PadicElement t = PadicElement::rational(p_, L.t, cap);
  PadicElement zt = eval_series(p_, *z, t, Jz, cap).with_prec(work);
  PadicElement st = eval_series(p_, *sig, t, Js, cap).with_prec(work);
  PadicElement m2 = PadicElement(p_, mpz_class(L.m) * L.m);
  PointHeights H;
  H.m = L.m;
  H.h_omega = -(zt * zt) / m2;
  PadicElement u = st / PadicElement(p_, L.d);
  PadicElement lg = log_unit(u);
  H.h_eta = PadicElement(p_, 2) * lg / m2 -
            PadicElement::rational(p_, mpq_class(E_.b2) / 12, work) * H.h_omega;
  H.h_omega = H.h_omega.with_prec(std::min(H.h_omega.prec(), prec_));
  H.h_eta = H.h_eta.with_prec(std::min(H.h_eta.prec(), prec_));
  if (H.h_omega.prec() < prec_ || H.h_eta.prec() < prec_)
    throw PrecisionError("height lost precision below the requested " + std::to_string(prec_));
  return H;
}

PointHeights HeightContext::components(const Point& P) const { return evaluate(local(P)); }

PadicElement HeightContext::formal_log(const Point& P) const {
  Local L = local(P);
  long work = prec_ + L.v + vp(mpz_class(L.m), p_) + 2;
  long J = terms_needed(L.v, work, false);
  auto z = series(J).second;
  long cap = work + J;
  PadicElement zt = eval_series(p_, *z, PadicElement::rational(p_, L.t, cap), J, cap).with_prec(work);
  return zt / PadicElement(p_, L.m);
}

std::vector<PointHeights> HeightContext::components_of(const std::vector<Point>& pts) const {
  std::vector<std::future<Local>> lf;
  for (const auto& P : pts) lf.push_back(std::async(std::launch::async, [this, P] { return local(P); }));
  std::vector<Local> locs;
  for (auto& f : lf) locs.push_back(f.get());
  long need = 0;
  for (const auto& L : locs) {
    long work = prec_ + L.v + 2 * vp(mpz_class(L.m), p_) + 3;
    need = std::max({need, terms_needed(L.v, work, true), terms_needed(L.v, work, false)});
  }
  series(need);
  std::vector<std::future<PointHeights>> hf;
  for (const auto& L : locs) hf.push_back(std::async(std::launch::async, [this, L] { return evaluate(L); }));
  std::vector<PointHeights> out;
  for (auto& f : hf) out.push_back(f.get());
  return out;
}

PadicElement HeightContext::height(const Vec2<PadicElement>& nu, const Point& P) const {
  PointHeights H = components(P);
  return nu.w * H.h_omega + nu.e * H.h_eta;
}

Matrix HeightContext::gram(const Vec2<PadicElement>& nu, const std::vector<Point>& pts) const {
  size_t r = pts.size();
  std::vector<Point> all(pts);
  std::vector<std::vector<long>> idx(r, std::vector<long>(r, -1));
  for (size_t i = 0; i < r; ++i)
    for (size_t j = i; j < r; ++j) {
      Point S = E_.add(pts[i], pts[j]);
      if (!S.inf && E_.mul(S, fx_.torsion_order).inf) S = Point{};
      if (S.inf) continue;
      idx[i][j] = static_cast<long>(all.size());
      all.push_back(S);
    }
  auto H = components_of(all);
  auto h = [&](size_t k) { return nu.w * H[k].h_omega + nu.e * H[k].h_eta; };
  Matrix G(r, std::vector<PadicElement>(r));
  for (size_t i = 0; i < r; ++i)
    for (size_t j = i; j < r; ++j) {
      PadicElement s = idx[i][j] >= 0 ? h(static_cast<size_t>(idx[i][j])) : PadicElement::zero(p_);
      G[i][j] = G[j][i] = s - h(i) - h(j);
    }
  return G;
}

PadicElement HeightContext::regulator(const Vec2<PadicElement>& nu, const std::vector<Point>& pts,
                                      long index) const {
  if (pts.empty()) return PadicElement(p_, 1);
  PadicElement d = determinant(gram(nu, pts));
  return d / PadicElement(p_, mpz_class(index) * index);
}

std::pair<PadicElement, PadicElement> HeightContext::reg_pm(const Dieudonne<PadicElement>& D,
                                                            const std::vector<Point>& pts,
                                                            long index) const {
  auto [nm, np] = D.n_vectors();
  long r = static_cast<long>(pts.size());
  PadicElement plus = regulator(np, pts, index) / pow(D.pair(D.omega(), np), r);
  PadicElement minus = regulator(nm, pts, index) / pow(D.pair(D.omega(), nm), r);
  return {plus, minus};
}

std::pair<PadicElement, PadicElement> HeightContext::reg_pm_normalized(
    const Dieudonne<PadicElement>& D, const std::vector<Point>& pts, long index) const {
  auto [nm, np] = D.n_vectors();
  auto norm = [&](const Vec2<PadicElement>& v) { return v.scale(D.one() / D.pair(D.omega(), v)); };
  return {regulator(norm(np), pts, index), regulator(norm(nm), pts, index)};
}

StrictMW HeightContext::strict_mw(const std::vector<Point>& pts) const {
  StrictMW out;
  out.reg_str = PadicElement(p_, 1);
  if (pts.empty()) return out;
  std::vector<PadicElement> logs;
  for (const auto& P : pts) logs.push_back(formal_log(P));
  out.kernel = strict_kernel(logs);
  out.strict_rank = static_cast<int>(out.kernel.size());
  if (out.kernel.empty()) return out;
  // normalized form h_nu/[omega, nu] at nu = eta
  Vec2<PadicElement> eta{PadicElement::zero(p_), PadicElement(p_, 1)};
  Matrix G = gram(eta, pts);
  size_t k = out.kernel.size(), r = pts.size();
  Matrix S(k, std::vector<PadicElement>(k, PadicElement::zero(p_)));
  for (size_t a = 0; a < k; ++a)
    for (size_t b = 0; b < k; ++b)
      for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < r; ++j)
          S[a][b] = S[a][b] + out.kernel[a][i] * G[i][j] * out.kernel[b][j];
  out.reg_str = determinant(S);
  return out;
}

}  // namespace pmbsd
