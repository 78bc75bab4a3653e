#pragma once

#include <cstdint>
#include <functional>

#include "ssn/types.hpp"

namespace ssn {

/// A family of photon-count distributions W(n | A_eta) parameterized by the
/// combined absorption A_eta. support_limit is exclusive; set to
/// kUnboundedSupport for distributions with a decaying tail.
struct CountDistribution {
  std::function<real(std::int64_t n, real a_eta)> pmf;
  std::int64_t support_limit = 0;
};

inline constexpr std::int64_t kUnboundedSupport = -1;

/// Poisson counts with mean (1 - A_eta) * n0 (coherent probe).
CountDistribution poisson_family(real n0);

/// Binomial counts over n0 trials with success probability 1 - A_eta
/// (Fock probe).
CountDistribution binomial_family(std::int64_t n0);

/// Preparation/detection transmissivities and the derived inefficiency
/// parameters.
struct EfficiencyBudget {
  real eta_p = 1;
  real eta_d = 1;

  real eta() const { return eta_p * eta_d; }
  real eps_p2() const { return (1 - eta_p) / eta_p; }
  real eps_d2() const { return (1 - eta_d) / eta_d; }
  real eps2() const { return eps_p2() + eps_d2(); }
  /// Combined absorption: 1 - A_eta = eta * (1 - absorption).
  real a_eta(real absorption) const { return 1 - eta() * (1 - absorption); }

  void validate() const;
};

/// Cramer-Rao bound from the Fisher information of the count distribution,
/// (1/eta) * [sum_n (dW/dA_eta)^2 / W]^{-1/2}, with the derivative taken
/// numerically. Returns 0 for a deterministic distribution (infinite
/// information) and +infinity when W carries no dependence on A_eta.
real fisher_cr_bound(const CountDistribution& dist, real absorption,
                     const EfficiencyBudget& budget);

/// Closed form for coherent light: sqrt(T / (eta_d * N)), N the mean photon
/// number at the object.
real cr_coherent(real n_at_object, real absorption, const EfficiencyBudget& budget);

/// Closed form for a Fock probe: sqrt([A + (1-eta) T] * T / (eta_d * N)).
real cr_fock(real n_at_object, real absorption, const EfficiencyBudget& budget);

/// Quantum advantage Q = cr_coherent / delta_A at equal photon budget and
/// efficiencies.
real quantum_advantage(real delta_A, real n_at_object, real absorption,
                       const EfficiencyBudget& budget);

}  // namespace ssn
