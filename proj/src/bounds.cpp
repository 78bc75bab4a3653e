#include "ssn/bounds.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ssn {

namespace {

constexpr real kProbFloor = 1e-300L;

real log_pmf_poisson(std::int64_t n, real lambda) {
  return n * std::log(lambda) - lambda - std::lgamma(static_cast<real>(n) + 1);
}

}  // namespace

CountDistribution poisson_family(real n0) {
  if (!(n0 > 0)) throw std::invalid_argument("poisson_family: n0 must be > 0");
  CountDistribution d;
  d.support_limit = kUnboundedSupport;
  d.pmf = [n0](std::int64_t n, real a_eta) -> real {
    const real lambda = (1 - a_eta) * n0;
    if (lambda <= 0) return n == 0 ? real(1) : real(0);
    return std::exp(log_pmf_poisson(n, lambda));
  };
  return d;
}

CountDistribution binomial_family(std::int64_t n0) {
  if (n0 <= 0) throw std::invalid_argument("binomial_family: n0 must be > 0");
  CountDistribution d;
  d.support_limit = n0 + 1;
  d.pmf = [n0](std::int64_t n, real a_eta) -> real {
    if (n < 0 || n > n0) return 0;
    const real p = 1 - a_eta;
    if (p <= 0) return n == 0 ? real(1) : real(0);
    if (p >= 1) return n == n0 ? real(1) : real(0);
    const real log_choose = std::lgamma(static_cast<real>(n0) + 1) -
                            std::lgamma(static_cast<real>(n) + 1) -
                            std::lgamma(static_cast<real>(n0 - n) + 1);
    return std::exp(log_choose + n * std::log(p) + (n0 - n) * std::log1p(-p));
  };
  return d;
}

void EfficiencyBudget::validate() const {
  if (!(eta_p > 0 && eta_p <= 1) || !(eta_d > 0 && eta_d <= 1))
    throw std::invalid_argument("efficiencies must lie in (0, 1]");
}

real fisher_cr_bound(const CountDistribution& dist, real absorption,
                     const EfficiencyBudget& budget) {
  budget.validate();
  if (!dist.pmf) throw std::invalid_argument("fisher_cr_bound: empty distribution");
  const real a_eta = budget.a_eta(absorption);
  if (!(a_eta >= 0 && a_eta < 1))
    throw std::domain_error("fisher_cr_bound: A_eta outside [0, 1)");

  // Step choice: the truncation error of the central difference scales as
  // h^2 * N0^2 / lambda for the families in scope, so the step must stay
  // well below 1e-3*A_eta to hold the 1e-6 agreement targets at N0 ~ 1e3.
  real h = std::max<real>(1e-8L, 1e-6L * a_eta);
  h = std::min({h, a_eta / 2, (1 - a_eta) / 2});
  if (h <= 0) h = std::min<real>(1e-12L, (1 - a_eta) / 2);

  real fisher = 0;
  real cum = 0;
  real max_w = 0;
  std::array<real, 10> last_terms{};
  std::array<real, 10> last_probs{};
  std::size_t ring = 0;
  int stale = 0;
  constexpr std::int64_t kHardCap = 50'000'000;

  const std::int64_t limit =
      dist.support_limit == kUnboundedSupport ? kHardCap : dist.support_limit;
  bool converged = false;
  for (std::int64_t n = 0; n < limit; ++n) {
    const real w0 = dist.pmf(n, a_eta);
    if (w0 < 0) throw std::domain_error("fisher_cr_bound: negative probability");
    cum += w0;
    max_w = std::max(max_w, w0);
    real term = 0;
    if (w0 > kProbFloor) {
      const real dw = (dist.pmf(n, a_eta + h) - dist.pmf(n, a_eta - h)) / (2 * h);
      term = dw * dw / w0;
    }
    fisher += term;
    last_terms[ring] = term;
    last_probs[ring] = w0;
    ring = (ring + 1) % last_terms.size();

    if (n >= static_cast<std::int64_t>(last_terms.size())) {
      real tail_terms = 0, tail_probs = 0;
      for (std::size_t k = 0; k < last_terms.size(); ++k) {
        tail_terms += last_terms[k];
        tail_probs += last_probs[k];
      }
      if (cum > 1 - 1e-13L && (fisher <= 0 || tail_terms < 1e-12L * fisher)) {
        converged = true;
        break;
      }
      // A pmf whose terms have died out while the cumulative mass is still
      // short is not normalized. Only meaningful once the bulk has been
      // seen; distributions supported far from n = 0 climb through many
      // negligible terms first.
      stale = (max_w > 1e-30L && tail_probs < 1e-18L * max_w) ? stale + 1 : 0;
      if (stale > 50) break;
    }
  }
  (void)converged;
  if (std::abs(cum - 1) > 1e-10L)
    throw std::invalid_argument("fisher_cr_bound: distribution is not normalized");

  if (max_w >= 1 - 1e-9L) return 0;  // deterministic counts: the bound is zero
  if (fisher <= 0) return std::numeric_limits<real>::infinity();
  return 1 / (budget.eta() * std::sqrt(fisher));
}

real cr_coherent(real n_at_object, real absorption, const EfficiencyBudget& budget) {
  budget.validate();
  if (!(n_at_object > 0)) throw std::invalid_argument("cr_coherent: N must be > 0");
  if (!(absorption >= 0 && absorption < 1))
    throw std::invalid_argument("cr_coherent: absorption must lie in [0, 1)");
  return std::sqrt((1 - absorption) / (budget.eta_d * n_at_object));
}

real cr_fock(real n_at_object, real absorption, const EfficiencyBudget& budget) {
  budget.validate();
  if (!(n_at_object > 0)) throw std::invalid_argument("cr_fock: N must be > 0");
  if (!(absorption >= 0 && absorption <= 1))
    throw std::invalid_argument("cr_fock: absorption must lie in [0, 1]");
  const real transm = 1 - absorption;
  return std::sqrt((absorption + (1 - budget.eta()) * transm) * transm /
                   (budget.eta_d * n_at_object));
}

real quantum_advantage(real delta_A, real n_at_object, real absorption,
                       const EfficiencyBudget& budget) {
  if (!(delta_A > 0))
    throw std::invalid_argument("quantum_advantage: delta_A must be > 0");
  return cr_coherent(n_at_object, absorption, budget) / delta_A;
}

}  // namespace ssn
