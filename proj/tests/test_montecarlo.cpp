#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "ssn/montecarlo.hpp"
#include "ssn/schemes.hpp"

using namespace ssn;

namespace {

McConfig paper_mc(std::int64_t samples, std::uint64_t seed) {
  McConfig mc;
  mc.nbar = 5;
  mc.absorption = 0.1L;
  mc.eta_p = 0.9L;
  mc.eta_d = 0.9L;
  mc.samples = samples;
  mc.seed = seed;
  return mc;
}

}  // namespace

TEST_CASE("lossless zero-absorption twins give exactly zero variance") {
  McConfig mc;
  mc.nbar = 3;
  mc.absorption = 0;
  mc.eta_p = 1;
  mc.eta_d = 1;
  mc.samples = 20000;
  mc.seed = 7;
  const McResult res = mc_twin_beam(mc);
  CHECK(res.delta_A_simple == 0);
  CHECK(res.delta_A_optk == 0);
}

TEST_CASE("empirical uncertainties match the exact twin formulas") {
  const McResult res = mc_twin_beam(paper_mc(1000000, 42));

  SchemeConfig cfg;
  cfg.N = 4.5L;  // eta_p * nbar
  cfg.absorption = 0.1L;
  cfg.eta_p = 0.9L;
  cfg.eta_d = 0.9L;
  cfg.kind = SchemeKind::TwinSimple;
  const real exact_simple = twin_uncertainty_simple(cfg).delta_A;
  cfg.kind = SchemeKind::TwinOptimizedK;
  const real exact_opt = twin_uncertainty_optimized(cfg).delta_A;

  CHECK(std::abs(res.delta_A_simple - exact_simple) <= 3 * res.stderr_simple);
  CHECK(std::abs(res.delta_A_optk - exact_opt) <= 3 * res.stderr_optk);
  // The simple estimator is unbiased.
  const real se_mean = res.delta_A_simple / std::sqrt(real(res.samples));
  CHECK(std::abs(res.mean_simple - cfg.absorption) <= 3 * se_mean);
  // Optimality of k within statistical error.
  CHECK(res.delta_A_optk <=
        res.delta_A_simple + 3 * (res.stderr_simple + res.stderr_optk));
}

TEST_CASE("sampler is deterministic and shard-count independent") {
  const McResult a = mc_twin_beam(paper_mc(200000, 1234));
  setenv("SSN_THREADS", "1", 1);
  const McResult b = mc_twin_beam(paper_mc(200000, 1234));
  setenv("SSN_THREADS", "4", 1);
  const McResult c = mc_twin_beam(paper_mc(200000, 1234));
  unsetenv("SSN_THREADS");
  CHECK(a.delta_A_simple == b.delta_A_simple);
  CHECK(a.delta_A_simple == c.delta_A_simple);
  CHECK(a.delta_A_optk == c.delta_A_optk);
  CHECK(a.k_used == c.k_used);

  const McResult other_seed = mc_twin_beam(paper_mc(200000, 1235));
  CHECK(other_seed.delta_A_simple != a.delta_A_simple);
}

TEST_CASE("configuration validation") {
  McConfig mc = paper_mc(50, 1);  // too few samples
  CHECK_THROWS_AS(mc_twin_beam(mc), std::invalid_argument);
  mc = paper_mc(1000, 1);
  mc.nbar = 0;
  CHECK_THROWS_AS(mc_twin_beam(mc), std::invalid_argument);
  mc = paper_mc(1000, 1);
  mc.absorption = 1;
  CHECK_THROWS_AS(mc_twin_beam(mc), std::invalid_argument);
  mc = paper_mc(1000, 1);
  mc.eta_d = 0;
  CHECK_THROWS_AS(mc_twin_beam(mc), std::invalid_argument);
}
