#include <doctest.h>

#include <cmath>

#include "ssn/bounds.hpp"
#include "ssn/validate.hpp"

using namespace ssn;

namespace {
real rel(real a, real b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), real(1e-30L)});
}
}  // namespace

TEST_CASE("efficiency budget derived quantities") {
  EfficiencyBudget b{0.8L, 0.5L};
  CHECK(rel(b.eta(), 0.4L) < 1e-18L);
  CHECK(rel(b.eps_p2(), 0.25L) < 1e-18L);
  CHECK(rel(b.eps_d2(), 1.0L) < 1e-18L);
  CHECK(rel(b.a_eta(0.1L), 1 - 0.4L * 0.9L) < 1e-18L);
  CHECK(b.a_eta(0) == doctest::Approx(0.6));
  EfficiencyBudget ideal;
  CHECK(ideal.a_eta(0.3L) == doctest::Approx(0.3));
  CHECK_THROWS_AS((EfficiencyBudget{0, 1}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((EfficiencyBudget{1, 1.2L}.validate()), std::invalid_argument);
}

TEST_CASE("fisher sum matches the coherent closed form") {
  EfficiencyBudget b{0.9L, 1.0L};  // eta = 0.9
  const real n0 = 100;
  const real bound = fisher_cr_bound(poisson_family(n0), 0.1L, b);
  const real closed = cr_coherent(b.eta_p * n0, 0.1L, b);
  CHECK(rel(bound, closed) < 1e-6L);
}

TEST_CASE("fisher sum matches the Fock closed form") {
  EfficiencyBudget b{0.9L, 1.0L};
  const std::int64_t n0 = 50;
  const real bound = fisher_cr_bound(binomial_family(n0), 0.1L, b);
  const real closed = cr_fock(b.eta_p * static_cast<real>(n0), 0.1L, b);
  CHECK(rel(bound, closed) < 1e-6L);
}

TEST_CASE("fisher grid agreement for both families") {
  for (const auto& c : validate_fisher()) CHECK_MESSAGE(c.pass, c.name);
}

TEST_CASE("fisher edge behavior") {
  EfficiencyBudget ideal;
  // A family that carries no dependence on the absorption: no information.
  CountDistribution flat;
  flat.support_limit = kUnboundedSupport;
  flat.pmf = [](std::int64_t n, real) -> real {
    return std::exp(n * std::log(real(4)) - 4 - std::lgamma(real(n) + 1));
  };
  CHECK(std::isinf(static_cast<double>(fisher_cr_bound(flat, 0.2L, ideal))));

  // Deterministic counts: the bound is exactly zero, not a failure.
  CountDistribution point;
  point.support_limit = 10;
  point.pmf = [](std::int64_t n, real) -> real { return n == 3 ? real(1) : real(0); };
  CHECK(fisher_cr_bound(point, 0.2L, ideal) == 0);

  // A non-normalized family is rejected.
  CountDistribution broken;
  broken.support_limit = kUnboundedSupport;
  broken.pmf = [](std::int64_t n, real a) -> real {
    const real lambda = (1 - a) * 20;
    return 0.5L * std::exp(n * std::log(lambda) - lambda - std::lgamma(real(n) + 1));
  };
  CHECK_THROWS_AS(fisher_cr_bound(broken, 0.2L, ideal), std::invalid_argument);
}

TEST_CASE("coherent Cramer-Rao closed form") {
  EfficiencyBudget ideal;
  CHECK(rel(cr_coherent(1e7L, 0, ideal), 3.16227766016838e-4L) < 1e-12L);
  CHECK(rel(cr_coherent(1e4L, 0.5L, ideal), 7.0710678118655e-3L) < 1e-12L);
  EfficiencyBudget half{1.0L, 0.5L};
  CHECK(rel(cr_coherent(100, 0, half), std::sqrt(1.0L / 50)) < 1e-15L);
  CHECK_THROWS_AS(cr_coherent(0, 0.1L, ideal), std::invalid_argument);
}

TEST_CASE("Fock Cramer-Rao closed form") {
  EfficiencyBudget ideal;
  const real a = 1e-5L;
  const real v = cr_fock(1e7L, a, ideal);
  CHECK(rel(v, std::sqrt(a * (1 - a) / 1e7L)) < 1e-15L);
  CHECK(rel(v, 1.0e-6L) < 1e-4L);
  CHECK(cr_fock(1e7L, 0, ideal) == 0);  // deterministic transmission
  CHECK_THROWS_AS(cr_fock(-1, 0.1L, ideal), std::invalid_argument);

  // Small-loss limit sqrt((A + eps^2)/N) within 1%.
  EfficiencyBudget small{0.999L, 0.999L};
  const real a2 = 1e-3L, n = 1e6L;
  const real approx = std::sqrt((a2 + small.eps2()) / n);
  CHECK(rel(cr_fock(n, a2, small), approx) < 0.01L);
}

TEST_CASE("Fock bound never exceeds the coherent bound") {
  for (real a : {0.0L, 1e-4L, 0.05L, 0.5L})
    for (real ep : {0.6L, 0.9L, 1.0L})
      for (real ed : {0.7L, 1.0L}) {
        EfficiencyBudget b{ep, ed};
        const real fock = cr_fock(1e4L, a, b);
        const real coh = cr_coherent(1e4L, a, b);
        CHECK(fock <= coh * (1 + 1e-15L));
        if (a + (1 - b.eta()) * (1 - a) < 1) CHECK(fock < coh);
      }
}

TEST_CASE("quantum advantage") {
  EfficiencyBudget ideal;
  const real base = cr_coherent(1e6L, 0.01L, ideal);
  CHECK(rel(quantum_advantage(base, 1e6L, 0.01L, ideal), 1.0L) < 1e-15L);
  CHECK_THROWS_AS(quantum_advantage(0, 1e6L, 0.01L, ideal), std::invalid_argument);

  // Fock case at A = 1e-5, no loss: Q ~ 316.2.
  const real q = quantum_advantage(cr_fock(1e7L, 1e-5L, ideal), 1e7L, 1e-5L, ideal);
  CHECK(rel(q, 316.2L) < 1e-3L);

  // Small-loss regime: Q = 1/sqrt(A + eps^2) within 1%, capped near 1/eps.
  EfficiencyBudget lossy{0.99L, 0.995L};
  for (real a : {1e-5L, 1e-4L, 1e-3L}) {
    const real qf = quantum_advantage(cr_fock(1e7L, a, lossy), 1e7L, a, lossy);
    CHECK(rel(qf, 1 / std::sqrt(a + lossy.eps2())) < 0.01L);
    CHECK(qf <= 1.1L / std::sqrt(lossy.eps2()));
  }
}
