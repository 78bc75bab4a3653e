#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ssn/types.hpp"

namespace ssn {

struct CheckResult {
  std::string name;
  real measured = 0;   // deviation in the units of the threshold
  real threshold = 0;
  bool pass = false;
  std::string note;
};

/// Fock-oracle suite: closed-form two-mode squeezed vacuum distribution,
/// cross-module moment agreement on random small configurations, and the
/// amplifier-equivalence identity with its negative control.
std::vector<CheckResult> validate_fock(std::uint64_t seed);

/// Monte Carlo versus the exact twin-beam uncertainties at R = 0.
std::vector<CheckResult> validate_mc(std::uint64_t seed, std::int64_t samples);

/// Exact scheme evaluations versus every printed asymptotic formula inside
/// its regime grid.
std::vector<CheckResult> validate_asymptotics();

/// Numeric Fisher sums versus the coherent/Fock closed forms on the
/// 27-point grid.
std::vector<CheckResult> validate_fisher();

bool all_passed(const std::vector<CheckResult>& checks);

}  // namespace ssn
