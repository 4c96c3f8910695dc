#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "resonax/lsolve.hpp"

namespace resonax {

struct IdentityCheck {
  std::string name;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  int samples = 0;  // evaluated
  int skipped = 0;  // near a pole or singular truncated matrix
  bool passed() const { return samples > 0 ? max_deviation <= tolerance : true; }
};

struct VerifyReport {
  std::uint64_t seed = 0;
  int requested_samples = 0;
  std::vector<IdentityCheck> checks;
  bool passed() const;
};

/// Checks the continuation identities at `samples` pseudo-random points drawn
/// from a mt19937_64 seeded with `seed`. Deviations are relative to
/// max(1, |reference|). Oracle comparisons run only for Yamaguchi models.
VerifyReport verify_identities(const Problem& problem, int samples, std::uint64_t seed);

}  // namespace resonax
