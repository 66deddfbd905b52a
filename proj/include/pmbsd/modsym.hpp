#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

#include "pmbsd/curve.hpp"

namespace pmbsd {

struct RecognitionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ModSymOptions {
  int digits = 60;
  std::string cache_dir;  // empty: no cache
  bool rebuild = false;
  unsigned threads = 0;   // 0: hardware concurrency
};

// Plus modular symbols [r]^+ = Re(2 pi i int_{i oo}^{r} f(z) dz) / Omega^+ from a table of Manin symbols.
class ModularSymbols {
 public:
  explicit ModularSymbols(const CurveFixture& fx, ModSymOptions opt = {});

  long conductor() const { return N_; }
  long denominator_bound() const { return bound_; }
  // common denominator of the table
  long scale() const { return scale_; }
  std::size_t size() const { return reps_.size(); }
  const std::string& digest() const { return digest_; }
  bool from_cache() const { return from_cache_; }

  mpq_class plus(const mpq_class& r) const;
  // scale() * [a/m]^+, exact
  long plus_scaled(long a, long m) const;
  mpq_class manin(long c, long d) const;

  // canonical representative of (c:d) in P^1(Z/N)
  std::pair<long, long> canonical(long c, long d) const;
  std::string cache_path() const;

 private:
  long index(long c, long d) const;
  void build_p1();
  void compute(const CurveFixture& fx, unsigned threads);
  bool load_cache();
  void save_cache() const;

  std::string label_;
  long N_ = 1;
  int digits_ = 60;
  long bound_ = 1;
  long scale_ = 1;
  std::string digest_, cache_dir_;
  bool from_cache_ = false;
  std::vector<long> idx_;                   // N*N table of class indices, -1 if not in P^1
  std::vector<std::pair<long, long>> reps_;
  std::vector<mpq_class> values_;
  std::vector<long> scaled_;
};

// L(E,1)/Omega^+ straight from the Dirichlet series (root number +1 assumed)
Real central_value_ratio(const CurveFixture& fx, int digits);

}  // namespace pmbsd
