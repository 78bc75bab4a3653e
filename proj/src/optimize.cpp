#include "ssn/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <stdexcept>
#include <thread>

namespace ssn {

namespace {

constexpr real kGoldenRatio = 0.6180339887498948482L;
constexpr real kRTolerance = 1e-6L;
constexpr int kScanPoints = 50;

real feasible_r_cap(const SchemeConfig& cfg) {
  // Keep alpha^2 >= 1e-9*N away from total photon conversion.
  return std::asinh(std::sqrt(cfg.N * (1 - 1e-9L) / cfg.eta_p));
}

real delta_A_at(const SchemeConfig& cfg, real r) {
  SchemeConfig c = cfg;
  c.r = r;
  return squeezed_coherent_uncertainty(c).delta_A;
}

}  // namespace

OptimizeResult optimize_input_squeezing(const SchemeConfig& cfg, real r_lo, real r_hi) {
  if (cfg.kind != SchemeKind::SqueezedCoherent)
    throw std::invalid_argument("optimize_input_squeezing: wrong scheme kind");
  {
    SchemeConfig probe = cfg;
    probe.r = 0;
    probe.validate();
  }
  const real cap = feasible_r_cap(cfg);
  r_lo = std::max<real>(r_lo, 0);
  r_hi = std::min(r_hi, cap);
  if (!(r_lo < r_hi))
    throw std::invalid_argument("optimize_input_squeezing: empty feasible bracket");

  // Coarse scan; strict improvement keeps the smallest r on ties.
  std::vector<real> xs(kScanPoints), fs(kScanPoints);
  int best = 0;
  int local_minima = 0;
  for (int i = 0; i < kScanPoints; ++i) {
    xs[i] = r_lo + (r_hi - r_lo) * i / (kScanPoints - 1);
    fs[i] = delta_A_at(cfg, xs[i]);
    if (fs[i] < fs[best]) best = i;
  }
  for (int i = 0; i < kScanPoints; ++i) {
    const bool left_up = i == 0 || fs[i - 1] > fs[i];
    const bool right_up = i == kScanPoints - 1 || fs[i + 1] > fs[i];
    if (left_up && right_up) ++local_minima;
  }

  real lo = xs[std::max(best - 1, 0)];
  real hi = xs[std::min(best + 1, kScanPoints - 1)];
  real x1 = hi - kGoldenRatio * (hi - lo);
  real x2 = lo + kGoldenRatio * (hi - lo);
  real f1 = delta_A_at(cfg, x1);
  real f2 = delta_A_at(cfg, x2);
  while (hi - lo > kRTolerance) {
    if (f1 <= f2) {  // <= biases toward the lower end on ties
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kGoldenRatio * (hi - lo);
      f1 = delta_A_at(cfg, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kGoldenRatio * (hi - lo);
      f2 = delta_A_at(cfg, x2);
    }
  }

  OptimizeResult out;
  out.r_opt = f1 <= f2 ? x1 : x2;
  SchemeConfig at_opt = cfg;
  at_opt.r = out.r_opt;
  out.report = squeezed_coherent_uncertainty(at_opt);
  out.report.r_opt = out.r_opt;
  out.unimodal = local_minima <= 1;
  return out;
}

OptimizeResult optimize_input_squeezing(const SchemeConfig& cfg) {
  return optimize_input_squeezing(cfg, 0, feasible_r_cap(cfg));
}

int worker_count() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("SSN_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) hw = std::min(hw, cap);
  }
  return hw;
}

SweepResult run_sweep(const SweepSpec& spec) {
  if (spec.grid.empty()) throw std::invalid_argument("run_sweep: empty grid");
  for (size_t i = 1; i < spec.grid.size(); ++i)
    if (!(spec.grid[i] > spec.grid[i - 1]))
      throw std::invalid_argument("run_sweep: grid must be strictly increasing");

  const auto config_at = [&](real v) {
    SchemeConfig c = spec.base;
    if (spec.axis == SweepAxis::EtaD)
      c.eta_d = v;
    else
      c.R = v;
    c.validate();
    return c;
  };

  SweepResult result;
  result.rows.resize(spec.grid.size());
  const auto eval_point = [&](size_t i) {
    const real v = spec.grid[i];
    try {
      const SchemeConfig c = config_at(v);
      SweepRow row;
      row.axis_value = v;
      if (spec.optimize_r && c.kind == SchemeKind::SqueezedCoherent) {
        const OptimizeResult opt = optimize_input_squeezing(c);
        row.delta_A = opt.report.delta_A;
        row.Q = opt.report.Q;
        row.transfer_G = opt.report.transfer_G;
        row.r_opt = opt.r_opt;
      } else {
        const UncertaintyReport rep = evaluate_scheme(c);
        row.delta_A = rep.delta_A;
        row.Q = rep.Q;
        row.transfer_G = rep.transfer_G;
        row.k_opt = rep.k_opt;
        row.r_opt = rep.r_opt;
      }
      result.rows[i] = row;
    } catch (const std::exception& e) {
      throw std::invalid_argument("sweep point at axis value " +
                                  std::to_string(static_cast<double>(v)) + ": " +
                                  e.what());
    }
  };

  const int workers = std::min<int>(worker_count(), static_cast<int>(spec.grid.size()));
  if (workers <= 1 || spec.grid.size() < 8) {
    for (size_t i = 0; i < spec.grid.size(); ++i) eval_point(i);
    return result;
  }

  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (size_t i = w; i < spec.grid.size(); i += workers) eval_point(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& err : errors)
    if (err) std::rethrow_exception(err);
  return result;
}

}  // namespace ssn
