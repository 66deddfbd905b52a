#pragma once

#include <string>

#include "pmbsd/modsym.hpp"
#include "pmbsd/qalpha.hpp"
#include "pmbsd/series.hpp"

namespace pmbsd {

struct InsufficientLevel : PrecisionError {
  long required_n;
  InsufficientLevel(const std::string& what, long n) : PrecisionError(what), required_n(n) {}
};

enum class Sampling { Generator, Representatives };

struct LSeriesOptions {
  Sampling sampling = Sampling::Generator;
  int root = 1;        // +1: alpha = sqrt(-p), -1: beta = -alpha
  bool certify = true;  // clamp coefficients to the proven error bound
  long min_prec = 0;    // with certify, throw InsufficientLevel below this for X^1..X^{M-1}
  unsigned threads = 0;
};

// -v_p of the common denominator of the modular symbols
long symbol_defect(const ModularSymbols& ms, long p);
// proven absolute precision (doubled) of the X^j coefficient at level n, j >= 1
long certified_prec2(long p, long n, long j, long d);
// smallest level certifying absolute precision prec on X^1..X^{M-1}
long level_for(long p, long M, long prec, long d);

// mu_alpha(a + p^n Z_p), exact
QAlpha mu_alpha(const ModularSymbols& ms, long p, long a, long n, int root = 1);

// Riemann sum at level n for L_p(E, alpha, T), T = (1+p)^s - 1, modulo X^M
TruncatedSeries lp_series(const ModularSymbols& ms, long p, long n, long M, const LSeriesOptions& opt = {});

struct SignedPair {
  TruncatedSeries minus, plus;
  long level = 0;  // Riemann-sum level behind the inputs, 0 if synthetic
};

// (L^-, L^+) with (L^-, L^+) M_log = (L_alpha, L_beta)
SignedPair signed_decompose(const TruncatedSeries& la, const TruncatedSeries& lb, long prec = 0);
// (L_alpha, L_beta) = (L^-, L^+) M_log
std::pair<TruncatedSeries, TruncatedSeries> recombine(const SignedPair& s, long prec = 0);

}  // namespace pmbsd
