#pragma once

#include <Eigen/Dense>
#include <complex>

#include "ssn/types.hpp"

namespace ssn {

/// Truncated Fock-space state of one or two modes. Pure states stay vectors
/// until a lossy channel mixes them; two-mode basis index is
/// n0*(cutoff+1) + n1.
struct FockState {
  int n_modes = 1;
  int cutoff = 0;          // maximum occupation per mode
  real tail_tol = 1e-8L;   // declared truncation budget
  Eigen::VectorXcd pure;   // nonempty iff pure
  Eigen::MatrixXcd rho;    // nonempty iff mixed

  static FockState make_vacuum(int n_modes, int cutoff);

  bool is_pure() const { return pure.size() > 0; }
  int dim() const;
  Eigen::MatrixXcd density() const;
  /// Diagonal of the (possibly pure) state in the number basis.
  Eigen::VectorXd number_probabilities() const;
  real trace() const;
  /// Probability mass sitting at the truncation boundary (any mode at the
  /// cutoff level).
  real tail_mass() const;
  /// Hermiticity, eigenvalue floor and trace window; O(dim^3) for mixed
  /// states, intended for tests.
  void validate() const;
};

/// Smallest cutoff for which a geometric (thermal-like) marginal with the
/// given mean keeps tail mass below tail_tol.
int suggest_cutoff(real mean_photons, real tail_tol = 1e-10L);

FockState fock_displace(const FockState& state, int mode, real alpha);

/// exp[g(a1+ a2+ - a1 a2)]; Heisenberg action a1 -> a1 cosh g + a2^dag sinh g.
FockState fock_apply_two_mode_squeezer(const FockState& state, real gain);

/// exp[(g/2)(e^{i phase}(a+)^2 - e^{-i phase} a^2)];
/// a -> a cosh g + e^{i phase} a^dag sinh g. phase 0 stretches x.
FockState fock_apply_single_mode_squeezer(const FockState& state, int mode,
                                          real gain, real phase = 0);

/// Same mode convention as the Gaussian beamsplitter; set inverse to undo.
FockState fock_apply_beamsplitter(const FockState& state, real transmissivity,
                                  real phase, bool inverse = false);

/// Attenuation channel via the damping Kraus decomposition; exactly trace
/// preserving on the truncated space.
FockState fock_apply_loss(const FockState& state, int mode, real eta);

/// Means/variances/covariance from number-operator traces.
PhotonStats fock_photon_moments(const FockState& state);

real trace_distance(const FockState& a, const FockState& b);

/// Compares two synchronized single-mode squeezers (common squeeze axis at
/// -45 degrees) against the beamsplitter-conjugated two-mode squeezer on a
/// fixed probe: two-mode squeezed vacuum (r = 0.3) with one arm attenuated
/// to 0.9. The attenuation is carried by an explicit vacuum ancilla, so
/// both outputs stay pure and the returned trace distance has the closed
/// form sqrt(1 - |<a|b>|^2); the mixed-state distance is bounded above by
/// it. phase_offset detunes the second squeezer for negative controls.
real verify_amplifier_equivalence(real gain, int cutoff, real phase_offset = 0);

}  // namespace ssn
