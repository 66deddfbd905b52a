#include "pmbsd/modsym.hpp"

#include <mpfr.h>

#include <atomic>
#include <boost/crc.hpp>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>
#include <unistd.h>

namespace pmbsd {

namespace {

long modn(long a, long n) {
  long r = a % n;
  return r < 0 ? r + n : r;
}

// x with a*x = 1 mod n, n >= 1
long inv_mod(long a, long n) {
  if (n == 1) return 0;
  long t = 0, nt = 1, r = n, nr = modn(a, n);
  while (nr != 0) {
    long q = r / nr;
    std::tie(t, nt) = std::make_pair(nt, t - q * nt);
    std::tie(r, nr) = std::make_pair(nr, r - q * nr);
  }
  if (r != 1) throw std::domain_error("inv_mod: not invertible");
  return modn(t, n);
}

// a*d - b*c = 1
std::pair<long, long> complete(long c, long d) {
  long old_r = c, r = d, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    long q = old_r / r;
    std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
    std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
    std::tie(old_t, t) = std::make_pair(t, old_t - q * t);
  }
  // old_s*c + old_t*d = old_r = +-1
  if (old_r < 0) {
    old_s = -old_s;
    old_t = -old_t;
  }
  return {old_t, -old_s};  // a = old_t, b = -old_s
}

class Mpfr {
 public:
  explicit Mpfr(mpfr_prec_t bits) { mpfr_init2(v, bits); }
  ~Mpfr() { mpfr_clear(v); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
  mpfr_t v;
};

mpfr_prec_t bits_for(int digits) { return static_cast<mpfr_prec_t>(digits * 3.33) + 64; }

long terms_for(int digits, long y, long Q) {
  double kappa = 1.0 / (static_cast<double>(y) * std::sqrt(static_cast<double>(Q)));
  return static_cast<long>(std::ceil((digits + 10) * std::log(10.0) / (2 * M_PI * kappa))) + 1;
}

struct Lift {
  long a, b, c, d;
};

struct Integrator {
  long N;
  int digits;
  mpfr_prec_t bits;
  const std::vector<long>& an;
  const std::map<long, long>& bad;
  mutable std::mutex mu{};
  mutable std::map<std::pair<long, long>, std::shared_ptr<Mpfr>> memo{};

  long wq(long Q) const {
    long w = 1;
    for (const auto& [l, a] : bad)
      if (Q % l == 0) w *= -a;
    return w;
  }

  // Re E(u/y + i kappa), E(tau) = -sum a_n q^n / n, kappa = 1/(y sqrt Q)
  void re_E(mpfr_t out, long u, long y, long Q) const {
    {
      std::lock_guard<std::mutex> l(mu);
      auto it = memo.find({u, y});
      if (it != memo.end()) {
        mpfr_set(out, it->second->v, MPFR_RNDN);
        return;
      }
    }
    auto val = std::make_shared<Mpfr>(bits);
    re_E_sum(val->v, u, y, Q);
    mpfr_set(out, val->v, MPFR_RNDN);
    std::lock_guard<std::mutex> l(mu);
    memo.emplace(std::make_pair(u, y), std::move(val));
  }

  void re_E_sum(mpfr_t out, long u, long y, long Q) const {
    long T = terms_for(digits, y, Q);
    if (T >= static_cast<long>(an.size())) throw std::logic_error("q-expansion too short");
    Mpfr pi(bits), r(bits), rn(bits), t(bits), sum(bits), ang(bits);
    mpfr_const_pi(pi.v, MPFR_RNDN);
    // r = exp(-2 pi / (y sqrt Q))
    mpfr_set_si(t.v, Q, MPFR_RNDN);
    mpfr_sqrt(t.v, t.v, MPFR_RNDN);
    mpfr_mul_si(t.v, t.v, y, MPFR_RNDN);
    mpfr_div(r.v, pi.v, t.v, MPFR_RNDN);
    mpfr_mul_si(r.v, r.v, -2, MPFR_RNDN);
    mpfr_exp(r.v, r.v, MPFR_RNDN);
    std::vector<mpfr_t> cs(static_cast<size_t>(y));
    for (long k = 0; k < y; ++k) {
      mpfr_init2(cs[static_cast<size_t>(k)], bits);
      mpfr_mul_si(ang.v, pi.v, 2 * modn(k * u, y), MPFR_RNDN);
      mpfr_div_si(ang.v, ang.v, y, MPFR_RNDN);
      mpfr_cos(cs[static_cast<size_t>(k)], ang.v, MPFR_RNDN);
    }
    mpfr_set_ui(rn.v, 1, MPFR_RNDN);
    mpfr_set_ui(sum.v, 0, MPFR_RNDN);
    for (long n = 1; n <= T; ++n) {
      mpfr_mul(rn.v, rn.v, r.v, MPFR_RNDN);
      long a = an[static_cast<size_t>(n)];
      if (a == 0) continue;
      mpfr_mul(t.v, rn.v, cs[static_cast<size_t>(n % y)], MPFR_RNDN);
      mpfr_mul_si(t.v, t.v, a, MPFR_RNDN);
      mpfr_div_si(t.v, t.v, n, MPFR_RNDN);
      mpfr_add(sum.v, sum.v, t.v, MPFR_RNDN);
    }
    for (auto& c : cs) mpfr_clear(c);
    mpfr_neg(out, sum.v, MPFR_RNDN);
  }

  // Re lambda(x/y), lambda(r) = 2 pi i int_{i oo}^{r} f
  void re_lambda(mpfr_t out, long x, long y) const {
    if (y == 0) {
      mpfr_set_ui(out, 0, MPFR_RNDN);
      return;
    }
    if (y < 0) {
      x = -x;
      y = -y;
    }
    x = modn(x, y);
    long G = std::gcd(y, N), Q = N / G;
    long d = y == 1 ? 0 : inv_mod(modn(Q * x, y), y);
    Mpfr e1(bits), e2(bits);
    re_E(e1.v, x, y, Q);
    re_E(e2.v, modn(-d, y), y, Q);
    mpfr_mul_si(e2.v, e2.v, wq(Q), MPFR_RNDN);
    mpfr_sub(out, e1.v, e2.v, MPFR_RNDN);
    mpfr_neg(out, out, MPFR_RNDN);
  }

  // Re(lambda(g oo) - lambda(g 0)) / Omega^+
  void manin(mpfr_t out, const Lift& g, const mpfr_t omega) const {
    Mpfr u(bits), v(bits);
    re_lambda(u.v, g.a, g.c);
    re_lambda(v.v, g.b, g.d);
    mpfr_sub(out, u.v, v.v, MPFR_RNDN);
    mpfr_div(out, out, omega, MPFR_RNDN);
  }
};

// first continued-fraction convergent h/k (k <= bound) within 10^-tol_digits of x
bool snap(const mpfr_t x, long bound, int tol_digits, mpq_class& out) {
  mpfr_prec_t bits = mpfr_get_prec(x);
  Mpfr y(bits), fl(bits), diff(bits), tol(bits);
  mpfr_set(y.v, x, MPFR_RNDN);
  mpfr_set_si(tol.v, 10, MPFR_RNDN);
  mpfr_pow_si(tol.v, tol.v, -tol_digits, MPFR_RNDN);
  mpz_class h0 = 1, h1 = 0, k0 = 0, k1 = 1;  // h_{-1}, h_{-2}
  for (int it = 0; it < 200; ++it) {
    mpfr_floor(fl.v, y.v);
    mpz_class b;
    mpfr_get_z(b.get_mpz_t(), fl.v, MPFR_RNDN);
    mpz_class h = b * h0 + h1, k = b * k0 + k1;
    h1 = h0;
    h0 = h;
    k1 = k0;
    k0 = k;
    if (k > bound) return false;
    mpq_class q(h, k);
    q.canonicalize();
    mpfr_set_q(diff.v, q.get_mpq_t(), MPFR_RNDN);
    mpfr_sub(diff.v, diff.v, x, MPFR_RNDN);
    mpfr_abs(diff.v, diff.v, MPFR_RNDN);
    if (mpfr_cmp(diff.v, tol.v) <= 0) {
      out = q;
      return true;
    }
    mpfr_sub(y.v, y.v, fl.v, MPFR_RNDN);
    if (mpfr_zero_p(y.v)) return false;
    mpfr_ui_div(y.v, 1, y.v, MPFR_RNDN);
  }
  return false;
}

bool squarefree(long n) {
  for (long d = 2; d * d <= n; ++d)
    if (n % (d * d) == 0) return false;
  return true;
}

void set_omega(mpfr_t out, const Curve& E, int digits) {
  Periods P = real_periods(E, digits + 10);
  mpfr_set(out, P.omega_plus.backend().data(), MPFR_RNDN);
}

}  // namespace

ModularSymbols::ModularSymbols(const CurveFixture& fx, ModSymOptions opt)
    : label_(fx.label), N_(fx.conductor), digits_(opt.digits), cache_dir_(opt.cache_dir) {
  if (digits_ < 30) throw std::invalid_argument("modular symbols need at least 30 digits");
  if (!squarefree(N_)) throw std::invalid_argument("modular symbols: conductor must be squarefree");
  bound_ = 2 * fx.torsion_order * fx.torsion_order * N_;
  std::ostringstream key;
  key << "pmbsd-modsym-1|" << fx.label << "|" << fx.a1 << "," << fx.a2 << "," << fx.a3 << "," << fx.a4
      << "," << fx.a6 << "|" << N_ << "|" << digits_ << "|" << bound_;
  for (const auto& [l, a] : fx.bad_ap()) key << "|" << l << ":" << a;
  boost::crc_32_type crc;
  std::string k = key.str();
  crc.process_bytes(k.data(), k.size());
  std::ostringstream hex;
  hex << std::hex << crc.checksum();
  digest_ = hex.str();
  build_p1();
  if (!opt.rebuild && !cache_dir_.empty() && load_cache()) {
    from_cache_ = true;
  } else {
    unsigned th = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
    compute(fx, th);
    if (!cache_dir_.empty()) save_cache();
  }
  scale_ = 1;
  for (const auto& v : values_) scale_ = std::lcm(scale_, v.get_den().get_si());
  scaled_.clear();
  for (const auto& v : values_) scaled_.push_back(mpz_class(v * scale_).get_si());
}

void ModularSymbols::build_p1() {
  idx_.assign(static_cast<size_t>(N_ * N_), -1);
  std::vector<long> units;
  for (long l = 1; l <= N_; ++l)
    if (std::gcd(l, N_) == 1) units.push_back(l % N_);
  for (long c = 0; c < N_; ++c)
    for (long d = 0; d < N_; ++d) {
      if (std::gcd(std::gcd(c, d), N_) != 1 && N_ != 1) continue;
      if (idx_[static_cast<size_t>(c * N_ + d)] >= 0) continue;
      long id = static_cast<long>(reps_.size());
      reps_.push_back({c, d});
      for (long l : units) idx_[static_cast<size_t>(modn(l * c, N_) * N_ + modn(l * d, N_))] = id;
    }
}

long ModularSymbols::index(long c, long d) const {
  long i = idx_[static_cast<size_t>(modn(c, N_) * N_ + modn(d, N_))];
  if (i < 0) throw std::domain_error("not a point of P^1(Z/N)");
  return i;
}

std::pair<long, long> ModularSymbols::canonical(long c, long d) const {
  return reps_[static_cast<size_t>(index(c, d))];
}

void ModularSymbols::compute(const CurveFixture& fx, unsigned threads) {
  Curve E = fx.curve();
  auto cost = [&](long y) {
    if (y == 0) return 0.0;
    long a = std::labs(y);
    return static_cast<double>(a) * std::sqrt(static_cast<double>(N_ / std::gcd(a, N_)));
  };
  // cheapest SL2(Z) lift of every class
  std::vector<Lift> lifts(reps_.size());
  std::vector<double> best(reps_.size(), -1);
  for (long c = 0; c < N_; ++c)
    for (long d = 0; d < N_; ++d) {
      long id = idx_[static_cast<size_t>(c * N_ + d)];
      if (id < 0) continue;
      for (long cc : {c, c - N_})
        for (long dd : {d - N_, d, d + N_}) {
          if (std::gcd(std::labs(cc), std::labs(dd)) != 1) continue;
          double w = cost(cc) + cost(dd);
          auto& b = best[static_cast<size_t>(id)];
          if (b >= 0 && w >= b) continue;
          auto [a, bb] = complete(cc, dd);
          b = w;
          lifts[static_cast<size_t>(id)] = {a, bb, cc, dd};
        }
    }
  long T = 2;
  for (const auto& g : lifts)
    for (long y : {g.c, g.d})
      if (y != 0) T = std::max(T, terms_for(digits_ + 20, std::labs(y), N_ / std::gcd(std::labs(y), N_)));
  std::vector<long> an = q_expansion(E, T + 1, fx.bad_ap());

  const auto bad = fx.bad_ap();
  Integrator lo{N_, digits_, bits_for(digits_), an, bad};
  Integrator hi{N_, digits_ + 20, bits_for(digits_ + 20), an, bad};
  Mpfr om_lo(lo.bits), om_hi(hi.bits);
  set_omega(om_lo.v, E, digits_);
  set_omega(om_hi.v, E, digits_ + 20);

  values_.assign(reps_.size(), 0);
  std::atomic<size_t> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  auto work = [&] {
    try {
      Mpfr x(lo.bits), y(hi.bits), z(hi.bits), tol(hi.bits);
      for (size_t i = next++; i < reps_.size(); i = next++) {
        lo.manin(x.v, lifts[i], om_lo.v);
        mpq_class q;
        if (!snap(x.v, bound_, digits_ - 10, q))
          throw RecognitionError("Manin symbol (" + std::to_string(reps_[i].first) + ":" +
                                 std::to_string(reps_[i].second) + ") is not a rational with denominator <= " +
                                 std::to_string(bound_));
        hi.manin(y.v, lifts[i], om_hi.v);
        mpfr_set_q(z.v, q.get_mpq_t(), MPFR_RNDN);
        mpfr_sub(z.v, z.v, y.v, MPFR_RNDN);
        mpfr_abs(z.v, z.v, MPFR_RNDN);
        mpfr_set_si(tol.v, 10, MPFR_RNDN);
        mpfr_pow_si(tol.v, tol.v, -(digits_ + 10), MPFR_RNDN);
        if (mpfr_cmp(z.v, tol.v) > 0)
          throw RecognitionError("Manin symbol snap not confirmed at higher precision");
        values_[i] = q;
      }
    } catch (...) {
      std::lock_guard<std::mutex> l(err_mu);
      if (!err) err = std::current_exception();
      next = reps_.size();
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

std::string ModularSymbols::cache_path() const {
  return (std::filesystem::path(cache_dir_) / (label_ + ".modsym.json")).string();
}

bool ModularSymbols::load_cache() {
  std::ifstream in(cache_path());
  if (!in) return false;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const std::exception&) {
    return false;
  }
  if (j.value("digest", "") != digest_) return false;
  const auto& s = j.at("symbols");
  std::vector<mpq_class> vals(reps_.size());
  for (size_t i = 0; i < reps_.size(); ++i) {
    std::string key = std::to_string(reps_[i].first) + ":" + std::to_string(reps_[i].second);
    if (!s.contains(key)) return false;
    vals[i] = mpq_class(s.at(key).get<std::string>());
    vals[i].canonicalize();
  }
  values_ = std::move(vals);
  return true;
}

void ModularSymbols::save_cache() const {
  nlohmann::ordered_json j;
  j["label"] = label_;
  j["digest"] = digest_;
  j["digits"] = digits_;
  j["denominator_bound"] = bound_;
  nlohmann::ordered_json s = nlohmann::ordered_json::object();
  for (size_t i = 0; i < reps_.size(); ++i)
    s[std::to_string(reps_[i].first) + ":" + std::to_string(reps_[i].second)] = values_[i].get_str();
  j["symbols"] = s;
  std::filesystem::create_directories(cache_dir_);
  std::string path = cache_path();
  std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp);
    out << j.dump(1) << "\n";
    if (!out) throw std::runtime_error("cannot write " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

mpq_class ModularSymbols::manin(long c, long d) const { return values_[static_cast<size_t>(index(c, d))]; }

long ModularSymbols::plus_scaled(long a, long m) const {
  if (m == 0) return 0;
  if (m < 0) {
    a = -a;
    m = -m;
  }
  long g = std::gcd(std::labs(a), m);
  a /= g;
  m /= g;
  // convergents of a/m; g_k has bottom row (q_k, (-1)^{k-1} q_{k-1})
  long num = a, den = m;
  long q_prev = 1, q_cur = 0;  // q_{-2}, q_{-1}
  long sum = 0;
  long sign = -1;  // (-1)^{k-1} at k = 0
  while (true) {
    long b = num >= 0 ? num / den : -((-num + den - 1) / den);
    long q = b * q_cur + q_prev;
    sum += scaled_[static_cast<size_t>(index(q, sign * q_cur))];
    long r = num - b * den;
    if (r == 0) break;
    num = den;
    den = r;
    q_prev = q_cur;
    q_cur = q;
    sign = -sign;
  }
  return sum;
}

mpq_class ModularSymbols::plus(const mpq_class& r) const {
  mpq_class q = r;
  q.canonicalize();
  mpz_class n = q.get_num(), d = q.get_den();
  if (!n.fits_slong_p() || !d.fits_slong_p()) throw std::overflow_error("modular symbol argument too large");
  mpq_class v(plus_scaled(n.get_si(), d.get_si()), scale_);
  v.canonicalize();
  return v;
}

Real central_value_ratio(const CurveFixture& fx, int digits) {
  long N = fx.conductor;
  long T = terms_for(digits, 1, N);
  std::vector<long> an = q_expansion(fx.curve(), T + 1, fx.bad_ap());
  mpfr_prec_t bits = bits_for(digits);
  Mpfr r(bits), rn(bits), t(bits), sum(bits), om(bits);
  mpfr_const_pi(r.v, MPFR_RNDN);
  mpfr_mul_si(r.v, r.v, -2, MPFR_RNDN);
  mpfr_set_si(t.v, N, MPFR_RNDN);
  mpfr_sqrt(t.v, t.v, MPFR_RNDN);
  mpfr_div(r.v, r.v, t.v, MPFR_RNDN);
  mpfr_exp(r.v, r.v, MPFR_RNDN);
  mpfr_set_ui(rn.v, 1, MPFR_RNDN);
  mpfr_set_ui(sum.v, 0, MPFR_RNDN);
  for (long n = 1; n <= T; ++n) {
    mpfr_mul(rn.v, rn.v, r.v, MPFR_RNDN);
    if (an[static_cast<size_t>(n)] == 0) continue;
    mpfr_mul_si(t.v, rn.v, an[static_cast<size_t>(n)], MPFR_RNDN);
    mpfr_div_si(t.v, t.v, n, MPFR_RNDN);
    mpfr_add(sum.v, sum.v, t.v, MPFR_RNDN);
  }
  mpfr_mul_ui(sum.v, sum.v, 2, MPFR_RNDN);
  set_omega(om.v, fx.curve(), digits);
  mpfr_div(sum.v, sum.v, om.v, MPFR_RNDN);
  Real::default_precision(static_cast<unsigned>(digits + 10));
  return Real(sum.v);
}

}  // namespace pmbsd
