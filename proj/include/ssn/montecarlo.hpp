#pragma once

#include <cstdint>

#include "ssn/types.hpp"

namespace ssn {

/// Twin-beam photon-counting sampler for the R = 0 protocol.
struct McConfig {
  real nbar = 0;        // pre-loss mean photons per twin beam
  real absorption = 0;  // A
  real eta_p = 1;
  real eta_d = 1;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct McResult {
  real delta_A_simple = 0;
  real delta_A_optk = 0;
  real stderr_simple = 0;  // Monte Carlo standard error of delta_A_simple
  real stderr_optk = 0;
  real mean_simple = 0;    // empirical mean of the simple A-estimate
  real k_used = 0;
  std::int64_t samples = 0;
};

/// Draws twin pairs from the thermal (geometric) photon distribution with
/// both beams perfectly correlated, applies binomial thinning for eta_p,
/// the object and eta_d, and returns the empirical standard deviations of
/// the simple and optimized-k absorption estimates. Deterministic given the
/// seed and independent of worker count.
McResult mc_twin_beam(const McConfig& config);

}  // namespace ssn
