#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "pmbsd/heights.hpp"
#include "pmbsd/lfunction.hpp"

namespace pmbsd {

enum class Outcome { Pass, Fail, Undecidable, HypothesisNotMet };
const char* to_string(Outcome o);
int exit_code(Outcome o);

struct SeriesOrder {
  long lower = 0;   // leading coefficients that are exactly zero
  long upper = -1;  // first coefficient with decided valuation, -1 if none
  bool certified() const { return upper == lower; }
};

struct OrderCheck {
  SeriesOrder minus, plus;
  long rho = 0;
  bool rho_certified = false;
  Outcome verdict = Outcome::Undecidable;   // rho >= r
  Outcome equality = Outcome::Undecidable;  // rho == r
};

OrderCheck check_order(const SignedPair& sp, long r);

struct RhsBreakdown {
  long log_kappa = 0;  // valuation of log_p(kappa)^{-r}
  Valuation reg_plus, reg_minus;
  long sha = 0, tamagawa = 0, torsion_sq = 0;
};

// (R_+, R_-) = log_p(kappa)^{-r} (Reg^+, Reg^-) Sha Tam / tors^2
std::pair<PadicElement, PadicElement> rhs_leading(const CurveFixture& fx,
                                                  const std::pair<PadicElement, PadicElement>& regs,
                                                  long r, long prec, RhsBreakdown* out = nullptr);

// valuation of the X^r coefficient of L^+ and L^- against R_+ and R_-, as (plus, minus)
std::pair<Outcome, Outcome> compare_leading(const SignedPair& sp,
                                            const std::pair<PadicElement, PadicElement>& rhs, long r);

// p^{v(leading)}; throws PrecisionError when the valuation is undecided
mpz_class euler_char(const PadicElement& leading);

struct VerifyOptions {
  long level = 0;   // 0: chosen automatically
  long xtrunc = 0;  // 0: rank + 2
  long prec = 16;   // height precision
  long max_level = 0;  // 0: largest level with p^n <= 2^25
  std::string cache_dir;
  bool rebuild_cache = false;
};

struct VerificationReport {
  std::string label;
  long p = 0, rank = 0, level = 0, xtrunc = 0, prec = 0;
  std::vector<std::pair<std::string, bool>> hypotheses;
  std::string hypothesis_failure;
  std::optional<OrderCheck> order;
  std::optional<std::pair<Valuation, Valuation>> leading;  // (plus, minus)
  std::optional<std::pair<Valuation, Valuation>> rhs;
  std::optional<RhsBreakdown> breakdown;
  std::optional<std::pair<std::string, std::string>> euler;  // (plus, minus)
  std::vector<std::pair<std::string, Outcome>> verdicts;
  std::optional<SignedPair> series;
  std::optional<std::pair<PadicElement, PadicElement>> regs;
  long required_level = 0;
  std::string modsym_digest;
  Outcome outcome = Outcome::Undecidable;

  nlohmann::ordered_json to_json() const;
};

VerificationReport verify(const CurveFixture& fx, const VerifyOptions& opt = {});

}  // namespace pmbsd
