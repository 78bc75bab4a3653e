#include "ssn/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include "ssn/optimize.hpp"

namespace ssn {

namespace {

constexpr std::int64_t kBlockSize = 1 << 16;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::int64_t thin(std::mt19937_64& rng, std::int64_t n, double p) {
  if (n <= 0) return 0;
  if (p >= 1.0) return n;
  std::binomial_distribution<std::int64_t> dist;
  using Param = std::binomial_distribution<std::int64_t>::param_type;
  return dist(rng, Param(n, p));
}

// Sampling is sharded into fixed-size blocks with per-block derived seeds,
// so the merged sample arrays are identical for any worker count.
void fill_block(const McConfig& cfg, std::int64_t block, std::int64_t begin,
                std::int64_t end, std::vector<std::int64_t>& d1,
                std::vector<std::int64_t>& d2) {
  std::mt19937_64 rng(splitmix64(cfg.seed ^ (0x5851f42d4c957f2dULL * (block + 1))));
  const double p_success = 1.0 / (static_cast<double>(cfg.nbar) + 1.0);
  std::geometric_distribution<std::int64_t> twin(p_success);
  const double eta_p = static_cast<double>(cfg.eta_p);
  const double transm = 1.0 - static_cast<double>(cfg.absorption);
  const double eta_d = static_cast<double>(cfg.eta_d);
  for (std::int64_t i = begin; i < end; ++i) {
    const std::int64_t n = twin(rng);  // both beams share n
    std::int64_t b1 = thin(rng, n, eta_p);
    std::int64_t b2 = thin(rng, n, eta_p);
    b1 = thin(rng, b1, transm);
    d1[i] = thin(rng, b1, eta_d);
    d2[i] = thin(rng, b2, eta_d);
  }
}

}  // namespace

void McConfig::validate() const {
  if (!(nbar > 0)) throw std::invalid_argument("mc: nbar must be > 0");
  if (!(absorption >= 0 && absorption < 1))
    throw std::invalid_argument("mc: absorption must lie in [0, 1)");
  if (!(eta_p > 0 && eta_p <= 1) || !(eta_d > 0 && eta_d <= 1))
    throw std::invalid_argument("mc: efficiencies must lie in (0, 1]");
  if (samples < 100)
    throw std::invalid_argument("mc: need at least 100 samples for the covariance "
                                "estimate");
}

McResult mc_twin_beam(const McConfig& cfg) {
  cfg.validate();
  const std::int64_t m = cfg.samples;
  std::vector<std::int64_t> d1(m), d2(m);

  const std::int64_t blocks = (m + kBlockSize - 1) / kBlockSize;
  const int workers =
      std::min<int>(worker_count(), static_cast<int>(std::min<std::int64_t>(blocks, 8)));
  if (workers <= 1) {
    for (std::int64_t b = 0; b < blocks; ++b)
      fill_block(cfg, b, b * kBlockSize, std::min(m, (b + 1) * kBlockSize), d1, d2);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::int64_t b = w; b < blocks; b += workers)
          fill_block(cfg, b, b * kBlockSize, std::min(m, (b + 1) * kBlockSize), d1, d2);
      });
    for (auto& t : pool) t.join();
  }

  // Two-pass statistics in a fixed order keep the result reproducible.
  real m1 = 0, m2 = 0;
  for (std::int64_t i = 0; i < m; ++i) {
    m1 += d1[i];
    m2 += d2[i];
  }
  m1 /= m;
  m2 /= m;
  real s11 = 0, s22 = 0, s12 = 0;
  for (std::int64_t i = 0; i < m; ++i) {
    const real u = d1[i] - m1, v = d2[i] - m2;
    s11 += u * u;
    s22 += v * v;
    s12 += u * v;
  }
  s11 /= m;
  s22 /= m;
  s12 /= m;

  const real n_at_object = cfg.eta_p * cfg.nbar;
  const real g = -cfg.eta_d * n_at_object;  // R = 0 transfer function
  const real k = s22 > 0 ? s12 / s22 : 0;

  // Fourth central moments of the two estimator variables for the
  // delta-method standard error of a sample standard deviation.
  real q_simple = 0, q_opt = 0;
  const real mean_diff = m1 - m2;
  const real mean_opt = m1 - k * m2;
  for (std::int64_t i = 0; i < m; ++i) {
    const real u = (d1[i] - d2[i]) - mean_diff;
    const real w = (d1[i] - k * d2[i]) - mean_opt;
    q_simple += u * u * u * u;
    q_opt += w * w * w * w;
  }
  q_simple /= m;
  q_opt /= m;

  const real var_simple = std::max<real>(s11 + s22 - 2 * s12, 0);
  const real var_opt = std::max<real>(s11 - 2 * k * s12 + k * k * s22, 0);

  McResult res;
  res.samples = m;
  res.k_used = k;
  res.mean_simple = mean_diff / g;
  res.delta_A_simple = std::sqrt(var_simple) / std::abs(g);
  res.delta_A_optk = std::sqrt(var_opt) / std::abs(g);
  const auto stderr_of_sd = [m](real var, real q4) -> real {
    if (var <= 0) return 0;
    const real var_of_var = std::max<real>(q4 - var * var, 0) / m;
    return std::sqrt(var_of_var) / (2 * std::sqrt(var));
  };
  res.stderr_simple = stderr_of_sd(var_simple, q_simple) / std::abs(g);
  res.stderr_optk = stderr_of_sd(var_opt, q_opt) / std::abs(g);
  return res;
}

}  // namespace ssn
