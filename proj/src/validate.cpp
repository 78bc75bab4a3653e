#include "ssn/validate.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ssn/fock.hpp"
#include "ssn/gaussian.hpp"
#include "ssn/montecarlo.hpp"
#include "ssn/schemes.hpp"

namespace ssn {

namespace {

real rel_dev(real a, real b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), real(1e-9L)});
}

struct ChainOp {
  enum class Kind { Tms, Sms, Loss, Displace } kind;
  int mode = 0;
  real value = 0;  // gain, eta or alpha
};

struct OracleConfig {
  int n_modes = 1;
  std::vector<ChainOp> ops;
  bool amplified = false;
};

// Runs the chain and tracks the largest per-mode mean over all intermediate
// stages; the truncation budget must cover the most populated stage, not
// just the detected state.
GaussianState run_gaussian_chain(const OracleConfig& cfg, real* max_stage_mean) {
  GaussianState s = vacuum(cfg.n_modes);
  real peak = 0;
  const auto track = [&] {
    for (int m = 0; m < cfg.n_modes; ++m)
      peak = std::max(peak, photon_moments(s, m, m).mean1);
  };
  for (const auto& op : cfg.ops) {
    switch (op.kind) {
      case ChainOp::Kind::Tms:
        s = apply(two_mode_squeezer(op.value), s, {0, 1});
        break;
      case ChainOp::Kind::Sms:
        s = apply(single_mode_squeezer(op.value), s, {op.mode});
        break;
      case ChainOp::Kind::Loss:
        s = apply(loss_channel(op.value), s, {op.mode});
        break;
      case ChainOp::Kind::Displace:
        s = displace(s, op.mode, op.value);
        break;
    }
    track();
  }
  if (max_stage_mean) *max_stage_mean = peak;
  return s;
}

FockState run_fock_chain(const OracleConfig& cfg, int cutoff) {
  FockState s = FockState::make_vacuum(cfg.n_modes, cutoff);
  for (const auto& op : cfg.ops) {
    switch (op.kind) {
      case ChainOp::Kind::Tms:
        s = fock_apply_two_mode_squeezer(s, op.value);
        break;
      case ChainOp::Kind::Sms:
        s = fock_apply_single_mode_squeezer(s, op.mode, op.value);
        break;
      case ChainOp::Kind::Loss:
        s = fock_apply_loss(s, op.mode, op.value);
        break;
      case ChainOp::Kind::Displace:
        s = fock_displace(s, op.mode, op.value);
        break;
    }
  }
  return s;
}

real max_moment_deviation(const PhotonStats& a, const PhotonStats& b) {
  return std::max({rel_dev(a.mean1, b.mean1), rel_dev(a.mean2, b.mean2),
                   rel_dev(a.var1, b.var1), rel_dev(a.var2, b.var2),
                   rel_dev(a.cov12, b.cov12)});
}

OracleConfig random_oracle_config(std::mt19937_64& rng, bool two_mode) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  OracleConfig cfg;
  if (two_mode) {
    cfg.n_modes = 2;
    const real r = 0.15L + 0.25L * uni(rng);
    const real eta_p = 0.6L + 0.4L * uni(rng);
    const real absorption = 0.3L * uni(rng);
    const real amp = 0.3L * uni(rng);
    const real eta_d = 0.6L + 0.4L * uni(rng);
    cfg.ops.push_back({ChainOp::Kind::Tms, 0, r});
    cfg.ops.push_back({ChainOp::Kind::Loss, 0, eta_p});
    cfg.ops.push_back({ChainOp::Kind::Loss, 1, eta_p});
    if (absorption > 0)
      cfg.ops.push_back({ChainOp::Kind::Loss, 0, 1 - absorption});
    if (amp > 0.02L) {
      cfg.ops.push_back({ChainOp::Kind::Sms, 0, amp});
      cfg.ops.push_back({ChainOp::Kind::Sms, 1, amp});
      cfg.amplified = true;
    }
    cfg.ops.push_back({ChainOp::Kind::Loss, 0, eta_d});
    cfg.ops.push_back({ChainOp::Kind::Loss, 1, eta_d});
  } else {
    cfg.n_modes = 1;
    const real r_in = -0.5L + 1.0L * uni(rng);
    const real eta_p = 0.5L + 0.5L * uni(rng);
    const real alpha = 0.2L + 1.0L * uni(rng);
    const real absorption = 0.3L * uni(rng);
    const real amp = 0.4L * uni(rng);
    const real eta_d = 0.5L + 0.5L * uni(rng);
    cfg.ops.push_back({ChainOp::Kind::Sms, 0, r_in});
    cfg.ops.push_back({ChainOp::Kind::Loss, 0, eta_p});
    cfg.ops.push_back({ChainOp::Kind::Displace, 0, alpha});
    if (absorption > 0)
      cfg.ops.push_back({ChainOp::Kind::Loss, 0, 1 - absorption});
    if (amp > 0.02L) {
      cfg.ops.push_back({ChainOp::Kind::Sms, 0, amp});
      cfg.amplified = true;
    }
    cfg.ops.push_back({ChainOp::Kind::Loss, 0, eta_d});
  }
  return cfg;
}

}  // namespace

bool all_passed(const std::vector<CheckResult>& checks) {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.pass; });
}

std::vector<CheckResult> validate_fock(std::uint64_t seed) {
  std::vector<CheckResult> out;

  {  // Two-mode squeezed vacuum photon distribution, closed form.
    const real r = 0.4L;
    FockState s = FockState::make_vacuum(2, 40);
    s = fock_apply_two_mode_squeezer(s, r);
    const Eigen::VectorXd p = s.number_probabilities();
    const real th2 = std::tanh(r) * std::tanh(r);
    const real norm = 1 / (std::cosh(r) * std::cosh(r));
    real dev = 0;
    for (int n0 = 0; n0 <= 30; ++n0)
      for (int n1 = 0; n1 <= 30; ++n1) {
        const real expected = n0 == n1 ? norm * std::pow(th2, n0) : real(0);
        dev = std::max(dev, std::abs(real(p(n0 * 41 + n1)) - expected));
      }
    out.push_back({"fock.tmsv_distribution", dev, 1e-10L, dev <= 1e-10L, ""});
  }

  {  // Cross-module moment agreement on random small configurations.
    std::mt19937_64 rng(seed);
    real worst = 0;
    for (int i = 0; i < 20; ++i) {
      const bool two_mode = i % 5 < 2;
      const OracleConfig cfg = random_oracle_config(rng, two_mode);
      real peak_mean = 0;
      const GaussianState g = run_gaussian_chain(cfg, &peak_mean);
      const PhotonStats gs = photon_moments(g, 0, cfg.n_modes == 2 ? 1 : 0);
      int cutoff = suggest_cutoff(peak_mean);
      if (cfg.amplified) cutoff *= 2;
      cutoff = std::min(cutoff, cfg.n_modes == 2 ? 44 : 120);
      const FockState f = run_fock_chain(cfg, cutoff);
      worst = std::max(worst, max_moment_deviation(gs, fock_photon_moments(f)));
    }
    out.push_back({"fock.cross_module_20", worst, tol::fock_cross_check,
                   worst <= tol::fock_cross_check, "20 random configs"});
  }

  {  // Amplifier equivalence and its negative control. The cutoff follows
     // the tail of the photon-concentrating intermediate (+/- basis) state,
     // which grows with the gain.
    const std::pair<real, int> runs[] = {{0.1L, 40}, {0.3L, 48}, {0.5L, 64}};
    for (auto [g, cutoff] : runs) {
      const real dist = verify_amplifier_equivalence(g, cutoff);
      out.push_back({"fock.amplifier_equivalence_g" +
                         std::to_string(static_cast<double>(g)).substr(0, 3),
                     dist, 1e-9L, dist <= 1e-9L, ""});
    }
    const real dist = verify_amplifier_equivalence(0.5L, 64, 0.7853981633974483L);
    out.push_back({"fock.amplifier_negative_control", dist, 1e-3L, dist > 1e-3L,
                   "phase offset pi/4 must separate the circuits"});
  }

  return out;
}

std::vector<CheckResult> validate_mc(std::uint64_t seed, std::int64_t samples) {
  McConfig mc;
  mc.nbar = 5;
  mc.absorption = 0.1L;
  mc.eta_p = 0.9L;
  mc.eta_d = 0.9L;
  mc.samples = samples;
  mc.seed = seed;
  const McResult res = mc_twin_beam(mc);

  SchemeConfig cfg;
  cfg.N = mc.eta_p * mc.nbar;
  cfg.absorption = mc.absorption;
  cfg.eta_p = mc.eta_p;
  cfg.eta_d = mc.eta_d;
  cfg.R = 0;

  cfg.kind = SchemeKind::TwinSimple;
  const real exact_simple = twin_uncertainty_simple(cfg).delta_A;
  cfg.kind = SchemeKind::TwinOptimizedK;
  const real exact_opt = twin_uncertainty_optimized(cfg).delta_A;

  std::vector<CheckResult> out;
  const real dev_simple =
      std::abs(res.delta_A_simple - exact_simple) / (3 * res.stderr_simple);
  out.push_back({"mc.simple_vs_exact", dev_simple, 1.0L, dev_simple <= 1,
                 "|empirical - exact| in units of 3 standard errors"});
  const real dev_opt = std::abs(res.delta_A_optk - exact_opt) / (3 * res.stderr_optk);
  out.push_back({"mc.optimized_vs_exact", dev_opt, 1.0L, dev_opt <= 1, ""});
  const real se_mean = res.delta_A_simple / std::sqrt(real(res.samples));
  const real dev_mean = std::abs(res.mean_simple - mc.absorption) / (3 * se_mean);
  out.push_back({"mc.simple_unbiased", dev_mean, 1.0L, dev_mean <= 1, ""});
  out.push_back({"mc.optimized_not_worse",
                 (res.delta_A_optk - res.delta_A_simple) /
                     (3 * (res.stderr_simple + res.stderr_optk)),
                 1.0L,
                 res.delta_A_optk <=
                     res.delta_A_simple + 3 * (res.stderr_simple + res.stderr_optk),
                 ""});
  return out;
}

std::vector<CheckResult> validate_asymptotics() {
  std::vector<CheckResult> out;
  const auto push = [&](const std::string& name, real worst) {
    out.push_back({name, worst, 0.05L, worst <= 0.05L, "max relative deviation"});
  };

  const std::vector<real> n_grid = {1e6L, 1e7L};
  const std::vector<real> a_grid = {1e-5L, 1e-4L};
  const std::vector<std::pair<real, real>> eta_grid = {
      {1.0L, 1.0L}, {0.999L, 0.998L}, {0.9975L, 0.996L}};

  {  // Twin variants.
    real worst0s = 0, worstRs = 0, worst0o = 0, worstRo = 0;
    for (real n : n_grid)
      for (real a : a_grid)
        for (auto [ep, ed] : eta_grid) {
          SchemeConfig cfg;
          cfg.N = n;
          cfg.absorption = a;
          cfg.eta_p = ep;
          cfg.eta_d = ed;

          cfg.kind = SchemeKind::TwinSimple;
          cfg.R = 0;
          real exact = twin_uncertainty_simple(cfg).delta_A;
          worst0s = std::max(worst0s,
                             rel_dev(exact * exact,
                                     asymptotic_twin(cfg, TwinAsymptotic::Simple0)));
          for (real bigR : {2.5L, 3.0L}) {
            cfg.R = bigR;
            exact = twin_uncertainty_simple(cfg).delta_A;
            worstRs = std::max(worstRs,
                               rel_dev(exact * exact,
                                       asymptotic_twin(cfg, TwinAsymptotic::SimpleR)));
          }

          cfg.kind = SchemeKind::TwinOptimizedK;
          cfg.R = 0;
          exact = twin_uncertainty_optimized(cfg).delta_A;
          worst0o = std::max(worst0o,
                             rel_dev(exact * exact,
                                     asymptotic_twin(cfg, TwinAsymptotic::Opt0)));
          for (real bigR : {2.5L, 3.0L}) {
            cfg.R = bigR;
            exact = twin_uncertainty_optimized(cfg).delta_A;
            worstRo = std::max(worstRo,
                               rel_dev(exact * exact,
                                       asymptotic_twin(cfg, TwinAsymptotic::OptR)));
          }
        }
    push("asym.twin_simple_R0", worst0s);
    push("asym.twin_simple_bigR", worstRs);
    push("asym.twin_optimized_R0", worst0o);
    push("asym.twin_optimized_bigR", worstRo);
  }

  {  // Squeezed-coherent variants.
    real worst_noamp = 0, worst_opt0 = 0, worst_strong = 0, worst_optR = 0;
    for (real n : n_grid)
      for (real a : a_grid)
        for (auto [ep, ed] : eta_grid) {
          SchemeConfig cfg;
          cfg.kind = SchemeKind::SqueezedCoherent;
          cfg.N = n;
          cfg.absorption = a;
          cfg.eta_p = ep;
          cfg.eta_d = ed;

          cfg.R = 0;
          for (real r : {1.5L, 2.5L}) {
            cfg.r = r;
            const real exact = squeezed_coherent_uncertainty(cfg).delta_A;
            worst_noamp = std::max(
                worst_noamp,
                rel_dev(exact * exact,
                        asymptotic_squeezed(cfg, SqueezedAsymptotic::NoAmp)));
          }

          cfg.r = std::log(4 * n) / 6;
          real exact = squeezed_coherent_uncertainty(cfg).delta_A;
          worst_opt0 = std::max(
              worst_opt0,
              rel_dev(exact * exact,
                      asymptotic_squeezed(cfg, SqueezedAsymptotic::OptNoAmp)));

          for (real bigR : {2.5L, 3.0L}) {
            cfg.R = bigR;
            for (real r : {2.0L, 3.0L}) {
              cfg.r = r;
              exact = squeezed_coherent_uncertainty(cfg).delta_A;
              worst_strong = std::max(
                  worst_strong,
                  rel_dev(exact * exact,
                          asymptotic_squeezed(cfg, SqueezedAsymptotic::StrongAmp)));
            }
          }

          // Optimal-squeezing strong-amplification form inside e^{4R} <= 4N/100.
          const real r_max = std::log(4 * n / 100) / 4;
          const real bigR = std::min<real>(2.5L, r_max);
          if (std::exp(2 * bigR) >= 100) {
            cfg.R = bigR;
            cfg.r = std::log(4 * n) / 6 + 4 * bigR / 3;
            exact = squeezed_coherent_uncertainty(cfg).delta_A;
            worst_optR = std::max(
                worst_optR,
                rel_dev(exact * exact,
                        asymptotic_squeezed(cfg, SqueezedAsymptotic::OptStrongAmp)));
          }
        }
    push("asym.squeezed_noamp", worst_noamp);
    push("asym.squeezed_opt_R0", worst_opt0);
    push("asym.squeezed_strong", worst_strong);
    push("asym.squeezed_opt_bigR", worst_optR);
  }

  return out;
}

std::vector<CheckResult> validate_fisher() {
  std::vector<CheckResult> out;
  const std::vector<real> n0_grid = {50, 300, 1000};
  const std::vector<real> a_grid = {0.01L, 0.3L, 0.9L};
  const std::vector<real> eta_grid = {0.5L, 0.8L, 1.0L};
  real worst_poisson = 0, worst_binom = 0;
  for (real n0 : n0_grid)
    for (real a : a_grid)
      for (real eta : eta_grid) {
        EfficiencyBudget budget;
        budget.eta_p = std::pow(eta, real(1) / 3);
        budget.eta_d = eta / budget.eta_p;
        const real n_at_object = budget.eta_p * n0;

        const real fisher_p = fisher_cr_bound(poisson_family(n0), a, budget);
        worst_poisson =
            std::max(worst_poisson,
                     rel_dev(fisher_p, cr_coherent(n_at_object, a, budget)));

        const real fisher_b = fisher_cr_bound(
            binomial_family(static_cast<std::int64_t>(n0)), a, budget);
        worst_binom = std::max(
            worst_binom, rel_dev(fisher_b, cr_fock(n_at_object, a, budget)));
      }
  out.push_back({"fisher.poisson_vs_coherent", worst_poisson, 1e-6L,
                 worst_poisson <= 1e-6L, "27-point grid"});
  out.push_back({"fisher.binomial_vs_fock", worst_binom, 1e-6L,
                 worst_binom <= 1e-6L, "27-point grid"});
  return out;
}

}  // namespace ssn
