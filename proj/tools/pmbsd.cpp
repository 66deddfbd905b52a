#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "pmbsd/io.hpp"
#include "pmbsd/selftest.hpp"
#include "pmbsd/verifier.hpp"

using namespace pmbsd;

namespace {

std::string default_cache_dir() {
  if (const char* x = std::getenv("PMBSD_CACHE")) return x;
  if (const char* x = std::getenv("XDG_CACHE_HOME")) return std::string(x) + "/pmbsd";
  if (const char* h = std::getenv("HOME")) return std::string(h) + "/.cache/pmbsd";
  return ".pmbsd-cache";
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return nlohmann::json::parse(in);
}

void write_out(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Signed p-adic BSD checks for elliptic curves at supersingular primes"};
  app.require_subcommand(1);

  std::string fixture, report, cache_dir = default_cache_dir();
  VerifyOptions vo;
  bool no_cache = false;
  auto* verify_cmd = app.add_subcommand("verify", "run the full pipeline on a fixture");
  verify_cmd->add_option("fixture", fixture, "fixture JSON")->required()->check(CLI::ExistingFile);
  verify_cmd->add_option("--level", vo.level, "Riemann-sum level n (default: automatic)");
  verify_cmd->add_option("--max-level", vo.max_level, "upper limit for the automatic level");
  verify_cmd->add_option("--xtrunc", vo.xtrunc, "X-truncation M (default: rank + 2)");
  verify_cmd->add_option("--prec", vo.prec, "p-adic precision of the heights")->capture_default_str();
  verify_cmd->add_flag("--rebuild-cache", vo.rebuild_cache, "recompute modular symbols and rewrite the cache");
  verify_cmd->add_flag("--no-cache", no_cache, "neither read nor write the cache");
  verify_cmd->add_option("--cache-dir", cache_dir, "modular-symbol cache directory")->capture_default_str();
  verify_cmd->add_option("--report", report, "write the JSON report here instead of stdout");

  int trials = 20;
  long st_prec = 20;
  std::uint64_t seed = 1;
  bool exact = false;
  auto* self_cmd = app.add_subcommand("selftest", "randomized Dieudonne-module identity suites");
  self_cmd->add_option("--trials", trials, "Frobenius data per prime")->capture_default_str();
  self_cmd->add_option("--prec", st_prec, "working precision")->capture_default_str();
  self_cmd->add_option("--seed", seed)->capture_default_str();
  self_cmd->add_flag("--exact", exact, "run in Q(alpha) instead of Q_p(alpha)");

  std::string in_path, out_path;
  long dprec = 0;
  auto* dec_cmd = app.add_subcommand("decompose", "signed decomposition of (L_alpha, L_beta)");
  dec_cmd->add_option("input", in_path, "JSON with L_alpha and optionally L_beta (coefficient strings)")
      ->required()
      ->check(CLI::ExistingFile);
  dec_cmd->add_option("--prec", dprec, "precision of the half-logarithms (default: from the input)");
  dec_cmd->add_option("-o,--output", out_path, "output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*verify_cmd) {
      CurveFixture fx = load_fixture(fixture);
      vo.cache_dir = no_cache ? "" : cache_dir;
      VerificationReport R = verify(fx, vo);
      write_out(report, R.to_json().dump(2) + "\n");
      std::cerr << fx.label << " p=" << fx.p << " r=" << fx.rank << " level=" << R.level << ": "
                << to_string(R.outcome);
      for (const auto& [k, o] : R.verdicts) std::cerr << " " << k << "=" << to_string(o);
      if (R.required_level) std::cerr << " required_level=" << R.required_level;
      std::cerr << "\n";
      return exit_code(R.outcome);
    }
    if (*self_cmd) {
      bool ok = true;
      for (long p : {5L, 7L, 13L}) {
        IdentityReport rep = run_identity_suite(p, trials, exact ? 0 : st_prec, seed + static_cast<std::uint64_t>(p));
        std::cout << "p=" << p << " trials=" << rep.trials << " checks=" << rep.checks
                  << " failures=" << rep.failures.size() << "\n";
        for (const auto& f : rep.failures) std::cout << "  " << f << "\n";
        ok = ok && rep.ok();
      }
      return ok ? 0 : 2;
    }
    if (*dec_cmd) {
      nlohmann::json j = read_json(in_path);
      TruncatedSeries la = series_from_json(j.at("L_alpha"));
      TruncatedSeries lb = j.contains("L_beta") ? series_from_json(j.at("L_beta")) : la.conj();
      SignedPair s = signed_decompose(la, lb, dprec);
      write_out(out_path, to_json(s).dump(2) + "\n");
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
