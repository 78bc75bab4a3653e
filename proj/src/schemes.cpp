#include "ssn/schemes.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ssn {

namespace {

PhotonStats twin_detected_stats(const SchemeConfig& cfg) {
  const GaussianState c = twin_predetection_state(cfg.twin_gain(), cfg.absorption,
                                                  cfg.eta_p, cfg.R);
  return detected_moments(photon_moments(c, 0, 1), cfg.eta_d);
}

real twin_transfer(const SchemeConfig& cfg) {
  return -cfg.eta_d * cfg.N * std::cosh(2 * cfg.R);
}

}  // namespace

void SchemeConfig::validate() const {
  if (!(N > 0)) throw std::invalid_argument("config: N must be > 0");
  if (!(absorption >= 0 && absorption < 1))
    throw std::invalid_argument("config: absorption must lie in [0, 1)");
  budget().validate();
  if (!(R >= 0)) throw std::invalid_argument("config: R must be >= 0");
  if (kind == SchemeKind::SqueezedCoherent) {
    if (!(r >= 0)) throw std::invalid_argument("config: r must be >= 0");
    const real sh = std::sinh(r);
    if (eta_p * sh * sh > N)
      throw std::invalid_argument(
          "config: eta_p*sinh^2(r) exceeds N, coherent amplitude undefined");
  }
}

real SchemeConfig::twin_gain() const { return std::asinh(std::sqrt(N / eta_p)); }

real SchemeConfig::coherent_amplitude() const {
  const real sh = std::sinh(r);
  const real a2 = N - eta_p * sh * sh;
  if (a2 < 0)
    throw std::invalid_argument("config: eta_p*sinh^2(r) exceeds N");
  return std::sqrt(a2);
}

GaussianState twin_predetection_state(real r_gain, real absorption, real eta_p,
                                      real R_gain) {
  GaussianState s = vacuum(2);
  s = apply(two_mode_squeezer(r_gain), s, {0, 1});
  const GaussianChannel prep = loss_channel(eta_p);
  s = apply(prep, s, {0});
  s = apply(prep, s, {1});
  if (absorption > 0) s = apply(loss_channel(1 - absorption), s, {0});
  if (R_gain != 0) {
    const GaussianChannel amp = single_mode_squeezer(R_gain);
    s = apply(amp, s, {0});
    s = apply(amp, s, {1});
  }
  return s;
}

GaussianState squeezed_predetection_state(real alpha, real r_signed,
                                          real absorption, real eta_p, real R_gain) {
  GaussianState s = vacuum(1);
  if (r_signed != 0) s = apply(single_mode_squeezer(r_signed), s, {0});
  s = apply(loss_channel(eta_p), s, {0});
  s = displace(s, 0, alpha);
  if (absorption > 0) s = apply(loss_channel(1 - absorption), s, {0});
  if (R_gain != 0) s = apply(single_mode_squeezer(R_gain), s, {0});
  return s;
}

UncertaintyReport twin_uncertainty_simple(const SchemeConfig& cfg) {
  if (cfg.kind != SchemeKind::TwinSimple)
    throw std::invalid_argument("twin_uncertainty_simple: wrong scheme kind");
  cfg.validate();
  const PhotonStats d = twin_detected_stats(cfg);
  const real g = twin_transfer(cfg);
  const real var_diff = std::max<real>(d.var1 + d.var2 - 2 * d.cov12, 0);
  UncertaintyReport rep;
  rep.detected = d;
  rep.transfer_G = g;
  rep.delta_A = std::sqrt(var_diff) / std::abs(g);
  rep.Q = rep.delta_A > 0
              ? quantum_advantage(rep.delta_A, cfg.N, cfg.absorption, cfg.budget())
              : std::numeric_limits<real>::infinity();
  return rep;
}

UncertaintyReport twin_uncertainty_optimized(const SchemeConfig& cfg) {
  if (cfg.kind != SchemeKind::TwinOptimizedK)
    throw std::invalid_argument("twin_uncertainty_optimized: wrong scheme kind");
  cfg.validate();
  const PhotonStats d = twin_detected_stats(cfg);
  if (!(d.var2 > 0))
    throw std::domain_error("twin_uncertainty_optimized: reference variance is zero, "
                            "estimator degenerate");
  const real g = twin_transfer(cfg);
  const real k = d.cov12 / d.var2;
  const real resid = std::max<real>(d.var1 - d.cov12 * d.cov12 / d.var2, 0);
  UncertaintyReport rep;
  rep.detected = d;
  rep.transfer_G = g;
  rep.k_opt = k;
  rep.delta_A = std::sqrt(resid) / std::abs(g);
  rep.Q = rep.delta_A > 0
              ? quantum_advantage(rep.delta_A, cfg.N, cfg.absorption, cfg.budget())
              : std::numeric_limits<real>::infinity();
  return rep;
}

UncertaintyReport squeezed_coherent_uncertainty(const SchemeConfig& cfg) {
  if (cfg.kind != SchemeKind::SqueezedCoherent)
    throw std::invalid_argument("squeezed_coherent_uncertainty: wrong scheme kind");
  cfg.validate();
  const real alpha = cfg.coherent_amplitude();
  // The amplitude quadrature carries the signal, so the input squeezer acts
  // with negative gain (squeezes x); the output amplifier stretches x.
  const real r_signed = -cfg.r;
  const GaussianState c = squeezed_predetection_state(alpha, r_signed,
                                                      cfg.absorption, cfg.eta_p, cfg.R);
  const PhotonStats d = detected_moments(photon_moments(c, 0, 0), cfg.eta_d);
  const real shR = std::sinh(cfg.R);
  const real sh_rR = std::sinh(r_signed + cfg.R);
  const real g = cfg.eta_d * (-alpha * alpha * std::exp(2 * cfg.R) -
                              cfg.eta_p * sh_rR * sh_rR + cfg.eta_p * shR * shR);
  if (g == 0)
    throw std::domain_error("squeezed_coherent_uncertainty: transfer function "
                            "vanishes, estimator degenerate");
  UncertaintyReport rep;
  rep.detected = d;
  rep.transfer_G = g;
  rep.r_opt = cfg.r;
  rep.delta_A = std::sqrt(std::max<real>(d.var1, 0)) / std::abs(g);
  rep.Q = rep.delta_A > 0
              ? quantum_advantage(rep.delta_A, cfg.N, cfg.absorption, cfg.budget())
              : std::numeric_limits<real>::infinity();
  return rep;
}

UncertaintyReport evaluate_scheme(const SchemeConfig& cfg) {
  switch (cfg.kind) {
    case SchemeKind::TwinSimple: return twin_uncertainty_simple(cfg);
    case SchemeKind::TwinOptimizedK: return twin_uncertainty_optimized(cfg);
    case SchemeKind::SqueezedCoherent: return squeezed_coherent_uncertainty(cfg);
  }
  throw std::logic_error("evaluate_scheme: unknown kind");
}

real asymptotic_twin(const SchemeConfig& cfg, TwinAsymptotic variant,
                     bool* regime_ok) {
  const EfficiencyBudget b = cfg.budget();
  const real a = cfg.absorption;
  const real n = cfg.N;
  const real eps2 = b.eps2();
  const real eps_eff = b.eps_p2() + b.eps_d2() * std::exp(-2 * cfg.R);
  bool ok = a <= 1e-4L && n >= 1e6L && eps2 <= 1e-2L;
  real value = 0;
  switch (variant) {
    case TwinAsymptotic::Simple0:
      ok = ok && cfg.R == 0;
      value = a * a + (a + 2 * eps2) / n;
      break;
    case TwinAsymptotic::SimpleR:
      ok = ok && std::exp(2 * cfg.R) >= 100;
      value = 2 * (a * a + (a + 2 * eps_eff) / n) + 1 / (n * n);
      break;
    case TwinAsymptotic::Opt0:
      ok = ok && cfg.R == 0;
      value = (a + 2 * eps2) / n;
      break;
    case TwinAsymptotic::OptR:
      ok = ok && std::exp(2 * cfg.R) >= 100;
      value = 2 * (a + 2 * eps_eff) / n + 1 / (n * n);
      break;
  }
  if (regime_ok) *regime_ok = ok;
  return value;
}

real asymptotic_squeezed(const SchemeConfig& cfg, SqueezedAsymptotic variant,
                         bool* regime_ok) {
  const EfficiencyBudget b = cfg.budget();
  const real a = cfg.absorption;
  const real n = cfg.N;
  const real r = std::abs(cfg.r);
  const real e2r = std::exp(2 * r);
  const real eps_eff = b.eps_p2() + b.eps_d2() * std::exp(-2 * cfg.R);
  bool ok = a <= 1e-4L && n >= 1e6L && b.eps2() <= 1e-2L;
  real value = 0;
  switch (variant) {
    case SqueezedAsymptotic::NoAmp:
      ok = ok && cfg.R == 0 && e2r >= 10;
      value = (1 / e2r + a + b.eps2()) / n + e2r * e2r / (8 * n * n);
      break;
    case SqueezedAsymptotic::OptNoAmp:
      ok = ok && cfg.R == 0;
      value = (a + b.eps2()) / n +
              3 / (std::pow(real(2), real(5) / 3) * std::pow(n, real(4) / 3));
      break;
    case SqueezedAsymptotic::StrongAmp: {
      const real denom = n - e2r / 4;
      if (denom <= 0)
        throw std::domain_error("asymptotic_squeezed: N - e^{2|r|}/4 <= 0");
      ok = ok && std::exp(2 * cfg.R) >= 100 && e2r >= 10;
      value = (1 / e2r + a + eps_eff) / denom +
              e2r * e2r * std::exp(-8 * cfg.R) / (8 * denom * denom);
      break;
    }
    case SqueezedAsymptotic::OptStrongAmp:
      ok = ok && std::exp(2 * cfg.R) >= 100 &&
           std::exp(4 * cfg.R) <= 4 * n / 100;
      value = (a + eps_eff) / n +
              3 * std::exp(-8 * cfg.R / 3) /
                  (std::pow(real(2), real(5) / 3) * std::pow(n, real(4) / 3));
      break;
  }
  if (regime_ok) *regime_ok = ok;
  return value;
}

real transfer_function_check(const SchemeConfig& cfg, real h) {
  cfg.validate();
  if (!(h > 0)) throw std::invalid_argument("transfer_function_check: h must be > 0");
  const bool forward = cfg.absorption == 0;
  if (!forward && !(h < cfg.absorption))
    throw std::invalid_argument("transfer_function_check: h must stay below A");

  const auto detected_mean = [&](real a) {
    SchemeConfig c = cfg;
    c.absorption = a;
    if (cfg.kind == SchemeKind::SqueezedCoherent) {
      const GaussianState s = squeezed_predetection_state(
          c.coherent_amplitude(), -c.r, c.absorption, c.eta_p, c.R);
      return detected_moments(photon_moments(s, 0, 0), c.eta_d).mean1;
    }
    const GaussianState s =
        twin_predetection_state(c.twin_gain(), c.absorption, c.eta_p, c.R);
    return detected_moments(photon_moments(s, 0, 1), c.eta_d).mean1;
  };

  real g_fd;
  if (forward)
    g_fd = (detected_mean(h) - detected_mean(0)) / h;
  else
    g_fd = (detected_mean(cfg.absorption + h) - detected_mean(cfg.absorption - h)) /
           (2 * h);

  real g_analytic;
  if (cfg.kind == SchemeKind::SqueezedCoherent) {
    const real alpha = cfg.coherent_amplitude();
    const real shR = std::sinh(cfg.R);
    const real sh_rR = std::sinh(-cfg.r + cfg.R);
    g_analytic = cfg.eta_d * (-alpha * alpha * std::exp(2 * cfg.R) -
                              cfg.eta_p * sh_rR * sh_rR + cfg.eta_p * shR * shR);
  } else {
    g_analytic = twin_transfer(cfg);
  }
  return std::abs(g_fd - g_analytic) / std::abs(g_analytic);
}

}  // namespace ssn
