#pragma once

#include <stdexcept>

namespace ssn {

// Extended precision for the Gaussian engine and the scheme estimators.
// At strong pre-detection amplification the variance of the difference
// signal lies ~12 decades below the individual photon-number variances;
// double cannot resolve the subtraction, 80-bit extended can.
using real = long double;

inline constexpr real kVacuumVariance = 0.5L;

// Centralized numerical tolerance constants.
namespace tol {
inline constexpr real cov_symmetry       = 1e-12L;
inline constexpr real symplectic_floor   = 1e-9L;  // slack on the uncertainty relation
inline constexpr real cp_condition       = 1e-9L;
inline constexpr real unitary_symplectic = 1e-10L;
inline constexpr real closed_form_moments = 1e-10L;
inline constexpr real cauchy_schwarz     = 1e-9L;
inline constexpr real fock_cross_check   = 1e-6L;
}  // namespace tol

/// First and second moments of the photon numbers in one or two modes.
/// For a single mode, mean2/var2 duplicate mean1/var1 and cov12 equals var1.
struct PhotonStats {
  real mean1 = 0;
  real mean2 = 0;
  real var1 = 0;
  real var2 = 0;
  real cov12 = 0;

  /// Enforces nonnegativity and the Cauchy-Schwarz bound on cov12.
  void validate() const;
};

}  // namespace ssn
