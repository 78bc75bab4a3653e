#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "ssn/optimize.hpp"

using namespace ssn;

namespace {

real rel(real a, real b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), real(1e-30L)});
}

SchemeConfig squeezed_config(real eta_d = 1, real bigR = 0) {
  SchemeConfig cfg;
  cfg.kind = SchemeKind::SqueezedCoherent;
  cfg.N = 1e7L;
  cfg.absorption = 1e-5L;
  cfg.eta_d = eta_d;
  cfg.R = bigR;
  return cfg;
}

}  // namespace

TEST_CASE("optimal squeezing without amplification") {
  const OptimizeResult opt = optimize_input_squeezing(squeezed_config());
  // e^{2r} = (4N)^{1/3}: r = ln(4N)/6 ~ 2.9174.
  CHECK(rel(opt.r_opt, 2.917398335346L) < 0.02L);
  CHECK(opt.report.r_opt.has_value());
  CHECK(opt.unimodal);
}

TEST_CASE("optimal squeezing grows as 4R/3 under amplification") {
  for (real bigR : {1.5L, 2.5L}) {
    const OptimizeResult opt = optimize_input_squeezing(squeezed_config(1, bigR));
    CHECK(rel(opt.r_opt, std::log(4e7L) / 6 + 4 * bigR / 3) < 0.02L);
  }
}

TEST_CASE("optimizer beats a dense grid scan") {
  const SchemeConfig cfg = squeezed_config(0.1L);
  const OptimizeResult opt = optimize_input_squeezing(cfg);

  // Brute-force oracle: dense uniform scan of the feasible interval.
  const real cap = std::asinh(std::sqrt(cfg.N * (1 - 1e-9L)));
  real best = std::numeric_limits<real>::infinity();
  real best_r = 0;
  const int points = 1000;
  for (int i = 0; i < points; ++i) {
    SchemeConfig probe = cfg;
    probe.r = cap * i / (points - 1);
    const real da = squeezed_coherent_uncertainty(probe).delta_A;
    if (da < best) {
      best = da;
      best_r = probe.r;
    }
  }
  CHECK(opt.report.delta_A <= best * (1 + 1e-12L));

  // Fine scan with step 1e-3 around the coarse winner.
  real fine_best = best;
  real fine_r = best_r;
  for (real r = std::max<real>(best_r - 0.05L, 0); r <= best_r + 0.05L; r += 1e-3L) {
    SchemeConfig probe = cfg;
    probe.r = r;
    const real da = squeezed_coherent_uncertainty(probe).delta_A;
    if (da < fine_best) {
      fine_best = da;
      fine_r = r;
    }
  }
  CHECK(std::abs(opt.r_opt - fine_r) < 2e-3L);
  CHECK(opt.report.delta_A <= fine_best * (1 + 1e-12L));
}

TEST_CASE("empty bracket is rejected") {
  CHECK_THROWS_AS(optimize_input_squeezing(squeezed_config(), 3.0L, 2.0L),
                  std::invalid_argument);
  SchemeConfig twin = squeezed_config();
  twin.kind = SchemeKind::TwinOptimizedK;
  CHECK_THROWS_AS(optimize_input_squeezing(twin), std::invalid_argument);
}

TEST_CASE("sweep over the amplifier gain") {
  SweepSpec spec;
  spec.base = squeezed_config();
  spec.base.kind = SchemeKind::TwinOptimizedK;
  spec.axis = SweepAxis::GainR;
  for (int i = 0; i <= 32; ++i) spec.grid.push_back(8.0L * i / 32);

  for (real eta_d : {0.99L, 0.9L, 0.5L, 0.1L}) {
    spec.base.eta_d = eta_d;
    const SweepResult res = run_sweep(spec);
    REQUIRE(res.rows.size() == spec.grid.size());
    for (size_t i = 1; i < res.rows.size(); ++i) {
      CHECK(res.rows[i].Q >= res.rows[i - 1].Q * (1 - 1e-9L));
      CHECK(res.rows[i].Q > 0);
    }
  }
}

TEST_CASE("optimized squeezing grows linearly with the gain across a sweep") {
  SweepSpec spec;
  spec.base = squeezed_config();
  spec.axis = SweepAxis::GainR;
  spec.optimize_r = true;
  for (int i = 0; i <= 8; ++i) spec.grid.push_back(1.0L + 0.25L * i);
  const SweepResult res = run_sweep(spec);
  real sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& row : res.rows) {
    REQUIRE(row.r_opt.has_value());
    sx += row.axis_value;
    sy += *row.r_opt;
    sxx += row.axis_value * row.axis_value;
    sxy += row.axis_value * *row.r_opt;
  }
  const real n = res.rows.size();
  const real slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(rel(slope, real(4) / 3) < 0.05L);
}

TEST_CASE("single-point sweep equals a direct evaluation") {
  SweepSpec spec;
  spec.base = squeezed_config();
  spec.base.kind = SchemeKind::TwinOptimizedK;
  spec.base.eta_d = 0.8L;
  spec.axis = SweepAxis::EtaD;
  spec.grid = {0.37L};
  const SweepResult res = run_sweep(spec);
  REQUIRE(res.rows.size() == 1);
  SchemeConfig direct = spec.base;
  direct.eta_d = 0.37L;
  const UncertaintyReport rep = twin_uncertainty_optimized(direct);
  CHECK(res.rows[0].delta_A == rep.delta_A);
  CHECK(res.rows[0].Q == rep.Q);
  CHECK(res.rows[0].k_opt == rep.k_opt);
}

TEST_CASE("sweep is a pure map independent of evaluation order") {
  SweepSpec spec;
  spec.base = squeezed_config();
  spec.axis = SweepAxis::GainR;
  spec.optimize_r = true;
  for (int i = 0; i < 12; ++i) spec.grid.push_back(0.25L * i);
  const SweepResult a = run_sweep(spec);
  for (size_t i = 1; i < a.rows.size(); ++i)  // optimized Q grows with the gain
    CHECK(a.rows[i].Q >= a.rows[i - 1].Q * (1 - 1e-9L));

  // Rebuild the same grid from a permuted source; sorted input must give
  // bitwise-identical rows regardless of worker scheduling.
  std::vector<real> shuffled = spec.grid;
  std::rotate(shuffled.begin(), shuffled.begin() + 5, shuffled.end());
  std::sort(shuffled.begin(), shuffled.end());
  spec.grid = shuffled;
  setenv("SSN_THREADS", "1", 1);
  const SweepResult b = run_sweep(spec);
  unsetenv("SSN_THREADS");
  REQUIRE(a.rows.size() == b.rows.size());
  for (size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].axis_value == b.rows[i].axis_value);
    CHECK(a.rows[i].delta_A == b.rows[i].delta_A);
    CHECK(a.rows[i].Q == b.rows[i].Q);
    CHECK(a.rows[i].r_opt == b.rows[i].r_opt);
  }
}

TEST_CASE("sweep validation and error reporting") {
  SweepSpec spec;
  spec.base = squeezed_config();
  spec.axis = SweepAxis::GainR;
  CHECK_THROWS_AS(run_sweep(spec), std::invalid_argument);  // empty grid
  spec.grid = {1.0L, 1.0L};
  CHECK_THROWS_AS(run_sweep(spec), std::invalid_argument);  // not increasing

  spec.axis = SweepAxis::EtaD;
  spec.grid = {0.5L, 2.0L};  // second point is an invalid efficiency
  try {
    run_sweep(spec);
    FAIL("expected an error for the invalid grid point");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("2.0") != std::string::npos);
  }
}
