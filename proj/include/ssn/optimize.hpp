#pragma once

#include <optional>
#include <vector>

#include "ssn/schemes.hpp"

namespace ssn {

struct OptimizeResult {
  real r_opt = 0;
  UncertaintyReport report;
  bool unimodal = true;  // false when the coarse pre-scan saw several minima
};

/// Minimizes the squeezed-coherent uncertainty over the input squeeze
/// magnitude by a 50-point coarse scan followed by golden-section search to
/// 1e-6 absolute in r. The bracket is clipped to keep alpha^2 >= 1e-9*N;
/// ties break toward smaller r.
OptimizeResult optimize_input_squeezing(const SchemeConfig& config, real r_lo,
                                        real r_hi);

/// Same, over the full feasible interval [0, r_max).
OptimizeResult optimize_input_squeezing(const SchemeConfig& config);

enum class SweepAxis { EtaD, GainR };

struct SweepSpec {
  SchemeConfig base;
  SweepAxis axis = SweepAxis::GainR;
  std::vector<real> grid;  // strictly increasing
  bool optimize_r = false;
};

struct SweepRow {
  real axis_value = 0;
  real delta_A = 0;
  real Q = 0;
  real transfer_G = 0;
  std::optional<real> r_opt;
  std::optional<real> k_opt;
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

/// Evaluates the scheme across the grid (optimizing r per point when
/// requested for the squeezed-coherent scheme). Rows follow grid order;
/// points may be evaluated concurrently.
SweepResult run_sweep(const SweepSpec& spec);

/// Worker cap honoring the SSN_THREADS environment variable.
int worker_count();

}  // namespace ssn
