#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ssn/types.hpp"

namespace ssn {

using RealVector = Eigen::Matrix<real, Eigen::Dynamic, 1>;
using RealMatrix = Eigen::Matrix<real, Eigen::Dynamic, Eigen::Dynamic>;

/// Gaussian state of n optical modes in (x1,p1,...,xn,pn) quadrature order.
///
/// Conventions: hbar = 1, vacuum variance 1/2, and a coherent amplitude
/// alpha (real) displaces <x> by sqrt(2)*alpha so that the displaced vacuum
/// carries alpha^2 photons on average.
struct GaussianState {
  int n_modes = 0;
  RealVector mean;  // length 2*n_modes
  RealMatrix cov;   // 2n x 2n, symmetric

  /// Symmetry, finiteness and the uncertainty relation (symplectic
  /// eigenvalues >= 1/2 within tolerance).
  void validate() const;
};

/// Gaussian channel acting on k modes as mean -> X*mean + shift,
/// cov -> X*cov*X^T + Y.
struct GaussianChannel {
  RealMatrix X;
  RealMatrix Y;
  RealVector shift;

  int n_modes() const { return static_cast<int>(X.rows()) / 2; }
  bool is_unitary() const;

  /// Complete positivity of (X, Y) and, for unitary channels, symplecticity.
  void validate() const;
};

/// Standard symplectic form on n modes (block-diagonal [[0,1],[-1,0]]).
RealMatrix symplectic_form(int n_modes);

/// Symplectic eigenvalues of a 2n x 2n covariance matrix (n values).
std::vector<real> symplectic_eigenvalues(const RealMatrix& cov);

GaussianState vacuum(int n_modes);

/// Displaces the x quadrature of one mode by sqrt(2)*alpha; covariance
/// unchanged.
GaussianState displace(const GaussianState& state, int mode, real alpha);

/// Phase-sensitive amplifier a -> a*cosh(g) + a^dag*sinh(g): stretches x by
/// e^g and compresses p by e^-g. Negative gain squeezes x.
GaussianChannel single_mode_squeezer(real gain);

/// Rotation a -> e^{i*theta} a in phase space.
GaussianChannel phase_shift(real theta);

/// Non-degenerate amplifier a1 -> a1*cosh(g) + a2^dag*sinh(g) (and 1<->2):
/// generates twin beams from vacuum.
GaussianChannel two_mode_squeezer(real gain);

/// Attenuation by power transmissivity eta with vacuum admixture.
GaussianChannel loss_channel(real eta);

/// a1 -> sqrt(t)*a1 + e^{i*phase}*sqrt(1-t)*a2,
/// a2 -> -e^{-i*phase}*sqrt(1-t)*a1 + sqrt(t)*a2.
/// Transmissivity 1 is the identity; (1/2, pi/2) maps to the +/- mode basis.
GaussianChannel beamsplitter(real transmissivity, real phase);

/// Inverse of a unitary (Y = 0) channel.
GaussianChannel inverse_unitary(const GaussianChannel& channel);

/// Applies a channel to the listed modes of a state (indices distinct and
/// in range, count matching the channel arity).
GaussianState apply(const GaussianChannel& channel, const GaussianState& state,
                    const std::vector<int>& modes);

/// Exact photon-number means, variances and cross-covariance of two modes
/// (mode_a == mode_b yields single-mode statistics with cov12 = var).
///
/// Derivation: with a = (x + ip)/sqrt(2), the complex second moments
///   nu_ij = <da_i^dag da_j>,  mu_ij = <da_i da_j>
/// follow from the quadrature covariances, and Wick's theorem gives
///   Cov(n_i,n_j) = 2Re(a_i* a_j* mu_ij) + 2Re(a_i* a_j nu_ji)
///                  + |mu_ij|^2 + |nu_ij|^2 + delta_ij(|a_i|^2 + nu_ii).
PhotonStats photon_moments(const GaussianState& state, int mode_a, int mode_b);

/// Detector-inefficiency map on photon statistics:
/// mean -> eta*mean, var -> eta^2*(var + eps_d^2*mean), cov -> eta^2*cov,
/// with eps_d^2 = (1-eta)/eta. Commutes with loss_channel + photon_moments.
PhotonStats detected_moments(const PhotonStats& stats, real eta_d);

}  // namespace ssn
