#pragma once

#include <memory>
#include <mutex>
#include <vector>

#include "pmbsd/curve.hpp"
#include "pmbsd/dieudonne.hpp"

namespace pmbsd {

using Matrix = std::vector<std::vector<PadicElement>>;

// Bernardi sigma as an exact series in t = -x/y, known modulo t^{M+1}
QSeries bernardi_sigma(const Curve& E, long M);
// (d/omega)^2 log sigma + x + b2/12, which vanishes for the true sigma
QSeries sigma_residual(const Curve& E, const QSeries& sigma);

// determinant by elimination with minimal-valuation pivots
PadicElement determinant(Matrix m);

struct PointHeights {
  PadicElement h_omega, h_eta;
  long m = 1;
};

struct StrictMW {
  int strict_rank = 0;
  PadicElement reg_str;
  Matrix kernel;  // rows: Z_p-combinations of the input points
};

// kernel of (c_i) -> sum c_i log_i; throws PrecisionError if every log is indistinguishable from 0
Matrix strict_kernel(const std::vector<PadicElement>& logs);

class HeightContext {
 public:
  // heights certified to absolute precision prec
  HeightContext(const CurveFixture& fx, long prec);

  const Curve& curve() const { return E_; }
  long p() const { return p_; }
  long prec() const { return prec_; }

  long multiple(const Point& P) const;
  // formal logarithm log_omega(P) = z(t_{mP})/m
  PadicElement formal_log(const Point& P) const;
  PointHeights components(const Point& P) const;
  PadicElement height(const Vec2<PadicElement>& nu, const Point& P) const;
  // <P, Q>_nu = h(P+Q) - h(P) - h(Q)
  Matrix gram(const Vec2<PadicElement>& nu, const std::vector<Point>& pts) const;
  PadicElement regulator(const Vec2<PadicElement>& nu, const std::vector<Point>& pts,
                         long index = 1) const;
  // (Reg_p^+, Reg_p^-) = Reg_{N_pm} / [omega, N_pm]^r
  std::pair<PadicElement, PadicElement> reg_pm(const Dieudonne<PadicElement>& D,
                                               const std::vector<Point>& pts, long index = 1) const;
  // the same via the normalized forms h_{N/[omega,N]}
  std::pair<PadicElement, PadicElement> reg_pm_normalized(const Dieudonne<PadicElement>& D,
                                                          const std::vector<Point>& pts,
                                                          long index = 1) const;
  StrictMW strict_mw(const std::vector<Point>& pts) const;

  // exact sigma and formal log, extended on demand to order at least M
  QSeries sigma(long M) const { return series(M).first->truncate(M + 1); }

 private:
  struct Local {
    mpq_class t;
    mpz_class d;
    long m, v;
  };
  Local local(const Point& P) const;
  PointHeights evaluate(const Local& L) const;
  long terms_needed(long v, long work, bool sigma) const;
  std::pair<std::shared_ptr<const QSeries>, std::shared_ptr<const QSeries>> series(long M) const;
  std::vector<PointHeights> components_of(const std::vector<Point>& pts) const;

  CurveFixture fx_;
  Curve E_;
  long p_, prec_;
  mutable std::mutex mu_;
  mutable std::shared_ptr<const QSeries> sigma_, z_;
};

}  // namespace pmbsd
