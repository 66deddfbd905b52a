#pragma once

#include <vector>

#include "pmbsd/padic.hpp"

namespace pmbsd {

// Power series in X known modulo X^M; each coefficient carries its own p-adic precision.
class TruncatedSeries {
 public:
  TruncatedSeries() = default;
  TruncatedSeries(long p, std::vector<PadicElement> coeffs);

  static TruncatedSeries zero(long p, long M, long prec = PadicElement::kExact, bool ext = false);
  static TruncatedSeries constant(const PadicElement& c, long M);
  // exact integer coefficients
  static TruncatedSeries from_integers(long p, const std::vector<mpz_class>& c);

  long p() const { return p_; }
  long trunc_order() const { return static_cast<long>(c_.size()); }
  bool is_extension() const;
  const PadicElement& operator[](long i) const { return c_.at(static_cast<size_t>(i)); }
  PadicElement& at(long i) { return c_.at(static_cast<size_t>(i)); }
  const std::vector<PadicElement>& coeffs() const { return c_; }

  TruncatedSeries operator+(const TruncatedSeries& o) const;
  TruncatedSeries operator-(const TruncatedSeries& o) const;
  TruncatedSeries operator*(const TruncatedSeries& o) const;
  TruncatedSeries operator*(const PadicElement& s) const;
  TruncatedSeries operator-() const;

  TruncatedSeries truncate(long M) const;
  // multiply by X^k (raises the truncation order by k)
  TruncatedSeries shift(long k) const;
  TruncatedSeries conj() const;
  TruncatedSeries re() const;
  TruncatedSeries im() const;
  TruncatedSeries to_qp() const;
  TruncatedSeries with_prec(long prec) const;

  // every coefficient agrees with o's within the joint precision
  bool agrees(const TruncatedSeries& o) const;
  bool same(const TruncatedSeries& o) const;

 private:
  long p_ = 0;
  std::vector<PadicElement> c_;
};

// Phi_n(1+X) = sum_{i=0}^{p-1} (1+X)^{p^{n-1} i} mod X^M
TruncatedSeries cyclotomic(long p, long n, long M);

struct HalfLogInfo {
  long factors = 0;  // number of cyclotomic factors used
  long certified_prec = 0;
};

// log_p^+ (sign > 0, even-index factors) or log_p^- (sign < 0, odd-index factors) mod X^M,
// coefficients certified to absolute precision prec.  K = 0 picks the cutoff automatically;
// a positive K is used as given and rejected if it cannot certify prec.
TruncatedSeries half_log(long p, int sign, long M, long prec, long K = 0,
                         HalfLogInfo* info = nullptr);

struct OrdLead {
  bool decided = false;
  long rho = 0;  // order when decided, else the lower bound M
  PadicElement lead;
};
OrdLead ord_and_leading(const TruncatedSeries& f);

TruncatedSeries divide(const TruncatedSeries& f, const TruncatedSeries& g);

}  // namespace pmbsd
