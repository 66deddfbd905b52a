#include "pmbsd/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pmbsd/io.hpp"

namespace pmbsd {

using nlohmann::ordered_json;

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Pass: return "pass";
    case Outcome::Fail: return "fail";
    case Outcome::Undecidable: return "undecidable";
    default: return "hypothesis_not_met";
  }
}

int exit_code(Outcome o) {
  switch (o) {
    case Outcome::Pass: return 0;
    case Outcome::Fail: return 2;
    case Outcome::Undecidable: return 3;
    default: return 4;
  }
}

namespace {

SeriesOrder order_of(const TruncatedSeries& f) {
  SeriesOrder s;
  long M = f.trunc_order();
  while (s.lower < M && f[s.lower].exact() && f[s.lower].is_zero()) ++s.lower;
  for (long i = 0; i < M; ++i)
    if (f[i].valuation().decided()) {
      s.upper = i;
      break;
    }
  return s;
}

Outcome from_verdict(Verdict v) {
  return v == Verdict::Equal ? Outcome::Pass : v == Verdict::Unequal ? Outcome::Fail : Outcome::Undecidable;
}

Outcome combine(std::initializer_list<Outcome> os) {
  bool und = false;
  for (Outcome o : os) {
    if (o == Outcome::Fail) return Outcome::Fail;
    und |= o == Outcome::Undecidable;
  }
  return und ? Outcome::Undecidable : Outcome::Pass;
}

long ceil_val(const Valuation& v) { return v.kind == Valuation::Infinite ? 0 : PadicElement::ceil_half(v.bound2()); }

}  // namespace

OrderCheck check_order(const SignedPair& sp, long r) {
  OrderCheck c;
  c.minus = order_of(sp.minus);
  c.plus = order_of(sp.plus);
  long lo = std::min(c.minus.lower, c.plus.lower);
  auto up = [](const SeriesOrder& s) { return s.upper < 0 ? LONG_MAX : s.upper; };
  long hi = std::min(up(c.minus), up(c.plus));
  c.rho = hi == LONG_MAX ? lo : hi;
  c.rho_certified = lo == hi;
  if (lo >= r)
    c.verdict = Outcome::Pass;
  else if (hi < r)
    c.verdict = Outcome::Fail;
  if (c.verdict == Outcome::Fail || lo > r)
    c.equality = Outcome::Fail;
  else if (c.verdict == Outcome::Pass && hi == r)
    c.equality = Outcome::Pass;
  return c;
}

std::pair<PadicElement, PadicElement> rhs_leading(const CurveFixture& fx,
                                                  const std::pair<PadicElement, PadicElement>& regs,
                                                  long r, long prec, RhsBreakdown* out) {
  long p = fx.p;
  mpq_class q(fx.sha_order * fx.tamagawa_product, fx.torsion_order * fx.torsion_order);
  q.canonicalize();
  PadicElement base = PadicElement::rational(p, q, prec + 2 * vp(mpz_class(fx.torsion_order), p) + 2);
  RhsBreakdown b;
  b.sha = vp(mpz_class(fx.sha_order), p);
  b.tamagawa = vp(mpz_class(fx.tamagawa_product), p);
  b.torsion_sq = 2 * vp(mpz_class(fx.torsion_order), p);
  std::pair<PadicElement, PadicElement> R{base, base};
  if (r > 0) {
    PadicElement lk = pow(log_kappa(p, prec + 2), r);
    R.first = regs.first * base / lk;
    R.second = regs.second * base / lk;
    b.log_kappa = -r;
    b.reg_plus = regs.first.valuation();
    b.reg_minus = regs.second.valuation();
  } else {
    b.reg_plus = b.reg_minus = Valuation{Valuation::Exact, 0};
  }
  if (out) *out = b;
  return R;
}

std::pair<Outcome, Outcome> compare_leading(const SignedPair& sp,
                                            const std::pair<PadicElement, PadicElement>& rhs, long r) {
  auto one = [r](const TruncatedSeries& f, const PadicElement& R) {
    SeriesOrder o = order_of(f);
    if ((o.upper >= 0 && o.upper < r) || o.lower > r) return Outcome::Fail;
    if (r >= f.trunc_order() || o.lower < r) return Outcome::Undecidable;
    return from_verdict(unit_equal(f[r], R));
  };
  return {one(sp.plus, rhs.first), one(sp.minus, rhs.second)};
}

mpz_class euler_char(const PadicElement& leading) {
  Valuation v = leading.valuation();
  if (!v.decided()) throw PrecisionError("euler_char: valuation of the leading coefficient is undecided");
  if (v.twice % 2 != 0) throw std::domain_error("euler_char: leading coefficient is not in Q_p");
  if (v.twice < 0) throw std::domain_error("euler_char: leading coefficient is not integral");
  return ipow(leading.p(), v.twice / 2);
}

namespace {

ordered_json order_json(const SeriesOrder& s) {
  if (s.certified()) return s.lower;
  return ">=" + std::to_string(s.lower);
}

std::string ppow(long p, const Valuation& v) {
  if (!v.decided()) return "undecided";
  return std::to_string(p) + "^" + Valuation{Valuation::Exact, v.twice}.str();
}

long default_max_level(long p) {
  long n = 0;
  mpz_class q = 1;
  while (q * p <= mpz_class(1L << 25)) {
    q *= p;
    ++n;
  }
  return n;
}

}  // namespace

ordered_json VerificationReport::to_json() const {
  ordered_json j;
  j["schema"] = "pmbsd-report/1";
  j["substitution"] =
      "characteristic series xi_p^+- of the signed Selmer groups replaced by the signed p-adic "
      "L-functions L_p^+- (main-conjecture equivalence); 'up to a p-adic unit' checked as valuation equality";
  j["label"] = label;
  j["p"] = p;
  j["rank"] = rank;
  j["parameters"] = {{"level", level}, {"xtrunc", xtrunc}, {"height_precision", prec}};
  ordered_json h = ordered_json::object();
  for (const auto& [k, v] : hypotheses) h[k] = v;
  j["hypotheses"] = h;
  if (!hypothesis_failure.empty()) j["hypothesis_failure"] = hypothesis_failure;
  if (order) {
    ordered_json o;
    o["ord_plus"] = order_json(order->plus);
    o["ord_minus"] = order_json(order->minus);
    o["rho"] = order->rho_certified ? ordered_json(order->rho) : ordered_json(">=" + std::to_string(order->rho));
    o["rho_certified"] = order->rho_certified;
    if (order->plus.certified() && order->minus.certified())
      o["ord_plus_equals_ord_minus"] = order->plus.lower == order->minus.lower;
    else
      o["ord_plus_equals_ord_minus"] = "undecided";
    j["order"] = o;
  }
  if (leading) j["leading_valuations"] = {{"plus", pmbsd::to_json(leading->first)}, {"minus", pmbsd::to_json(leading->second)}};
  if (rhs) j["rhs_valuations"] = {{"plus", pmbsd::to_json(rhs->first)}, {"minus", pmbsd::to_json(rhs->second)}};
  if (breakdown)
    j["rhs_breakdown"] = {{"log_kappa_power", breakdown->log_kappa},
                          {"reg_plus", pmbsd::to_json(breakdown->reg_plus)},
                          {"reg_minus", pmbsd::to_json(breakdown->reg_minus)},
                          {"sha", breakdown->sha},
                          {"tamagawa", breakdown->tamagawa},
                          {"torsion_squared", breakdown->torsion_sq}};
  if (euler) j["euler_char"] = {{"plus", euler->first}, {"minus", euler->second}};
  ordered_json v = ordered_json::object();
  for (const auto& [k, o] : verdicts) v[k] = pmbsd::to_string(o);
  j["verdicts"] = v;
  if (required_level) j["required_level"] = required_level;
  ordered_json led;
  if (!modsym_digest.empty()) led["modsym_digest"] = modsym_digest;
  if (series) {
    led["L_plus"] = pmbsd::to_json(series->plus);
    led["L_minus"] = pmbsd::to_json(series->minus);
  }
  if (regs) {
    led["reg_plus"] = regs->first.str();
    led["reg_minus"] = regs->second.str();
  }
  j["precision_ledger"] = led;
  j["outcome"] = pmbsd::to_string(outcome);
  return j;
}

VerificationReport verify(const CurveFixture& fx, const VerifyOptions& opt) {
  VerificationReport R;
  R.label = fx.label;
  R.p = fx.p;
  R.rank = fx.rank;
  R.prec = opt.prec;
  const long p = fx.p, r = fx.rank;

  auto unmet = [&](const std::string& name, const std::string& why) {
    R.hypotheses.emplace_back(name, false);
    R.hypothesis_failure = why;
    R.outcome = Outcome::HypothesisNotMet;
    return R;
  };

  std::vector<std::string> problems;
  for (const auto& s : validate_fixture(fx))
    if (s != "bad reduction at p" && s != "a_p != 0" && s.rfind("Frobenius datum", 0) != 0) problems.push_back(s);
  if (!problems.empty()) {
    std::string all;
    for (const auto& s : problems) all += (all.empty() ? "" : "; ") + s;
    throw std::invalid_argument("invalid fixture " + fx.label + ": " + all);
  }

  Curve E = fx.curve();
  if (fx.conductor % p == 0) return unmet("good_reduction_at_p", "p divides the conductor");
  R.hypotheses.emplace_back("good_reduction_at_p", true);
  if (count_ap(E, p) != 0) return unmet("a_p_zero", "a_p != 0");
  R.hypotheses.emplace_back("a_p_zero", true);

  std::optional<Dieudonne<PadicElement>> D;
  try {
    D.emplace(p, fx.frob_u, fx.frob_v, PadicElement(p, 1));
  } catch (const std::domain_error& e) {
    return unmet("weakly_admissible_frobenius", e.what());
  }
  R.hypotheses.emplace_back("weakly_admissible_frobenius", true);

  std::pair<PadicElement, PadicElement> regs{PadicElement(p, 1), PadicElement(p, 1)};
  if (r > 0) {
    HeightContext ctx(fx, opt.prec);
    StrictMW smw = ctx.strict_mw(fx.generators);
    if (smw.reg_str.is_zero())
      return unmet("strict_regulator_nonzero",
                   "Reg_p^str is indistinguishable from 0 at precision " + std::to_string(opt.prec));
    R.hypotheses.emplace_back("strict_regulator_nonzero", true);
    regs = ctx.reg_pm(*D, fx.generators);
    if (regs.first.is_zero() || regs.second.is_zero())
      return unmet("gram_nonsingular", "a signed regulator is indistinguishable from 0 at precision " +
                                           std::to_string(opt.prec));
    R.hypotheses.emplace_back("gram_nonsingular", true);
    R.regs = regs;
  }

  RhsBreakdown bd;
  auto rhs = rhs_leading(fx, regs, r, opt.prec, &bd);
  R.breakdown = bd;
  R.rhs = std::make_pair(rhs.first.valuation(), rhs.second.valuation());

  ModSymOptions mo;
  mo.cache_dir = opt.cache_dir;
  mo.rebuild = opt.rebuild_cache;
  ModularSymbols ms(fx, mo);
  R.modsym_digest = ms.digest();
  const long d = symbol_defect(ms, p);
  const long M = opt.xtrunc > 0 ? opt.xtrunc : r + 2;
  R.xtrunc = M;
  if (M <= r) throw std::invalid_argument("X-truncation must exceed the rank");
  long target = std::max({0L, ceil_val(R.rhs->first), ceil_val(R.rhs->second)});
  long needed = r == 0 ? 2 : level_for(p, r + 1, target, d);
  long max_level = opt.max_level > 0 ? opt.max_level : default_max_level(p);
  long n = opt.level > 0 ? opt.level : std::min(needed, max_level);

  while (true) {
    LSeriesOptions la, lb;
    lb.root = -1;
    SignedPair sp = signed_decompose(lp_series(ms, p, n, M, la), lp_series(ms, p, n, M, lb));
    sp.level = n;
    OrderCheck oc = check_order(sp, r);
    auto cmp = compare_leading(sp, rhs, r);
    R.verdicts.clear();
    R.verdicts.emplace_back("order_at_least_rank", oc.verdict);
    R.verdicts.emplace_back("order_equals_rank", oc.equality);
    R.verdicts.emplace_back("leading_plus", cmp.first);
    R.verdicts.emplace_back("leading_minus", cmp.second);
    R.leading = std::make_pair(sp.plus[std::min(r, M - 1)].valuation(), sp.minus[std::min(r, M - 1)].valuation());
    R.euler = std::make_pair(ppow(p, R.leading->first), ppow(p, R.leading->second));
    if (r == 0) {
      long want = vp(mpq_class(fx.sha_order * fx.tamagawa_product, fx.torsion_order * fx.torsion_order), p);
      auto ec = [&](const PadicElement& lead) {
        try {
          mpz_class e = euler_char(lead);
          return e == ipow(p, std::max(0L, want)) && want >= 0 ? Outcome::Pass : Outcome::Fail;
        } catch (const PrecisionError&) {
          return Outcome::Undecidable;
        } catch (const std::domain_error&) {
          return Outcome::Fail;
        }
      };
      R.verdicts.emplace_back("euler_characteristic", combine({ec(sp.plus[0]), ec(sp.minus[0])}));
    }
    R.order = oc;
    R.series = sp;
    R.level = n;
    Outcome all = Outcome::Pass;
    for (const auto& [k, o] : R.verdicts) all = combine({all, o});
    R.outcome = all;
    if (all != Outcome::Undecidable || opt.level > 0 || n >= max_level) break;
    ++n;
  }
  R.required_level = R.outcome == Outcome::Undecidable ? std::max(n + 1, needed) : 0;
  return R;
}

}  // namespace pmbsd
