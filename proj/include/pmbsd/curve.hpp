#pragma once

#include <gmpxx.h>

#include <boost/multiprecision/mpfr.hpp>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pmbsd/padic.hpp"
#include "pmbsd/qseries.hpp"

namespace pmbsd {

using Real = boost::multiprecision::mpfr_float;

struct Point {
  bool inf = true;
  mpq_class x, y;
  static Point at(const mpq_class& x, const mpq_class& y) { return {false, x, y}; }
  bool operator==(const Point& o) const { return inf == o.inf && (inf || (x == o.x && y == o.y)); }
};

class Curve {
 public:
  Curve() = default;
  Curve(long a1, long a2, long a3, long a4, long a6);

  mpz_class a1, a2, a3, a4, a6;
  mpz_class b2, b4, b6, b8, c4, c6, disc;

  bool on_curve(const Point& P) const;
  Point neg(const Point& P) const;
  Point add(const Point& P, const Point& Q) const;
  Point mul(const Point& P, long n) const;
  // order of P modulo ell (P reduced into E(F_ell)); 1 if P reduces to the identity
  long order_mod(const Point& P, long ell) const;
};

// ell + 1 - #E(F_ell); throws for primes dividing the discriminant
long count_ap(const Curve& E, long ell);

// a_1..a_M (index 0 unused); bad_ap maps bad primes to a_ell in {0, 1, -1}
std::vector<long> q_expansion(const Curve& E, long M, const std::map<long, long>& bad_ap);

struct FormalExpansions {
  QSeries w, x, y, f, z;  // z = formal logarithm, f = dz/dt
};
// w mod t^{M+3}; x mod t^{M-2}; y mod t^{M-3}; f mod t^M; z mod t^{M+1}
FormalExpansions formal_expansions(const Curve& E, long M);

struct Periods {
  Real omega_plus, omega_minus;
};
// least positive real period and the imaginary part of the complementary period
Periods real_periods(const Curve& E, int digits);

struct ReductionType {
  long prime;
  std::string type;  // split | nonsplit | additive
};

struct CurveFixture {
  std::string label;
  long a1 = 0, a2 = 0, a3 = 0, a4 = 0, a6 = 0;
  long conductor = 1;
  long p = 0;
  int rank = 0;
  std::vector<Point> generators;
  long torsion_order = 1;
  std::vector<Point> torsion_points;
  long tamagawa_product = 1;
  long sha_order = 1;
  PadicElement frob_u, frob_v;
  std::optional<std::pair<std::string, std::string>> periods;
  long precision = 20;
  std::vector<ReductionType> reduction_types;
  std::string provenance;

  Curve curve() const { return Curve(a1, a2, a3, a4, a6); }
  std::map<long, long> bad_ap() const;
};

CurveFixture load_fixture(const std::string& path);
CurveFixture fixture_from_json_text(const std::string& text);
std::string fixture_to_json_text(const CurveFixture& fx);

// invariant suite; returns a list of violated invariants (empty = ok)
std::vector<std::string> validate_fixture(const CurveFixture& fx);

mpq_class parse_rational(const std::string& s);
std::string rational_str(const mpq_class& q);

}  // namespace pmbsd
