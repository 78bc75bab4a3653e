#pragma once

#include <optional>
#include <string>

#include "ssn/bounds.hpp"
#include "ssn/gaussian.hpp"

namespace ssn {

enum class SchemeKind { TwinSimple, TwinOptimizedK, SqueezedCoherent };

/// Full parameter set of one measurement scenario.
///
/// N is the mean photon number at the object. For the twin-beam schemes the
/// parametric gain is derived from N (r = asinh(sqrt(N/eta_p))); for the
/// squeezed-coherent scheme r is the input squeeze magnitude and the
/// coherent amplitude follows as alpha = sqrt(N - eta_p*sinh^2 r).
struct SchemeConfig {
  SchemeKind kind = SchemeKind::TwinOptimizedK;
  real N = 0;
  real absorption = 0;
  real eta_p = 1;
  real eta_d = 1;
  real r = 0;  // input squeeze magnitude, squeezed-coherent only
  real R = 0;  // pre-detection amplifier gain

  void validate() const;
  EfficiencyBudget budget() const { return {eta_p, eta_d}; }
  real twin_gain() const;
  real coherent_amplitude() const;
};

struct UncertaintyReport {
  real delta_A = 0;
  real Q = 0;
  real transfer_G = 0;
  std::optional<real> k_opt;
  std::optional<real> r_opt;
  PhotonStats detected;
};

/// Two-mode state in front of the detectors for the twin-beam scheme:
/// NOPA(r) -> preparation loss on both arms -> object absorption on arm 0
/// -> synchronized DOPA(R) on both arms.
GaussianState twin_predetection_state(real r_gain, real absorption, real eta_p,
                                      real R_gain);

/// Single-mode state in front of the detector for the squeezed-coherent
/// scheme: DOPA(r_signed) on vacuum -> preparation loss -> displacement by
/// alpha -> object absorption -> DOPA(R). A negative r_signed squeezes the
/// amplitude quadrature.
GaussianState squeezed_predetection_state(real alpha, real r_signed,
                                          real absorption, real eta_p, real R_gain);

/// Difference estimator (n_d1 - n_d2)/G with G = -eta_d*N*cosh(2R).
UncertaintyReport twin_uncertainty_simple(const SchemeConfig& config);

/// Optimized estimator (n_d1 - k*n_d2)/G with k = cov(n_d1,n_d2)/var(n_d2).
UncertaintyReport twin_uncertainty_optimized(const SchemeConfig& config);

/// Single-beam estimator n_d/G for the squeezed-coherent probe;
/// G = eta_d*[-alpha^2 e^{2R} - eta_p sinh^2(R - r) + eta_p sinh^2 R].
UncertaintyReport squeezed_coherent_uncertainty(const SchemeConfig& config);

/// Dispatch on config.kind.
UncertaintyReport evaluate_scheme(const SchemeConfig& config);

enum class TwinAsymptotic { Simple0, SimpleR, Opt0, OptR };
enum class SqueezedAsymptotic { NoAmp, OptNoAmp, StrongAmp, OptStrongAmp };

/// Printed closed forms for (Delta A)^2 in the no-amplification / strong
/// amplification regimes. Out-of-regime use is flagged via regime_ok, not
/// rejected.
real asymptotic_twin(const SchemeConfig& config, TwinAsymptotic variant,
                     bool* regime_ok = nullptr);
real asymptotic_squeezed(const SchemeConfig& config, SqueezedAsymptotic variant,
                         bool* regime_ok = nullptr);

/// Relative deviation between the analytic transfer function G and a finite
/// difference of the detected mean over the absorption.
real transfer_function_check(const SchemeConfig& config, real h);

}  // namespace ssn
