#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pmbsd {

struct IdentityReport {
  long p = 0;
  int trials = 0;
  long checks = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

// Randomized Dieudonne-module identities: dual bases, the closed forms of N_+-, the pairing
// factors, and the modified-regulator coordinates against the brute-force path.
// prec <= 0 runs in Q(alpha) exactly, otherwise in Q_p(alpha) at absolute precision prec.
IdentityReport run_identity_suite(long p, int trials, long prec, std::uint64_t seed);

}  // namespace pmbsd
