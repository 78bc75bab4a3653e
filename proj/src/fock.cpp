#include "ssn/fock.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCore>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace ssn {

namespace {

using Cd = std::complex<double>;
using SpMat = Eigen::SparseMatrix<Cd>;
using Triplet = Eigen::Triplet<Cd>;

int dim_of(int n_modes, int cutoff) {
  const int d = cutoff + 1;
  return n_modes == 1 ? d : d * d;
}

void check_mode(const FockState& s, int mode) {
  if (mode < 0 || mode >= s.n_modes)
    throw std::out_of_range("fock: mode index out of range");
}

// Sparse matrix of f(n_target, n_source) placed at single-mode transitions
// n_source -> n_target, lifted to the product space on the chosen mode.
SpMat lifted_operator(int n_modes, int cutoff, int mode,
                      const std::vector<Triplet>& single) {
  const int d = cutoff + 1;
  const int dim = dim_of(n_modes, cutoff);
  std::vector<Triplet> entries;
  if (n_modes == 1) {
    entries = single;
  } else {
    entries.reserve(single.size() * d);
    for (int other = 0; other < d; ++other)
      for (const auto& t : single) {
        const int row = mode == 0 ? t.row() * d + other : other * d + t.row();
        const int col = mode == 0 ? t.col() * d + other : other * d + t.col();
        entries.emplace_back(row, col, t.value());
      }
  }
  SpMat m(dim, dim);
  m.setFromTriplets(entries.begin(), entries.end());
  return m;
}

double one_norm(const SpMat& m) {
  double best = 0;
  for (int k = 0; k < m.outerSize(); ++k) {
    double col = 0;
    for (SpMat::InnerIterator it(m, k); it; ++it) col += std::abs(it.value());
    best = std::max(best, col);
  }
  return best;
}

// exp(K) * M via scaled Taylor; K anti-Hermitian so no hump issues.
Eigen::MatrixXcd exp_action(const SpMat& k, Eigen::MatrixXcd m) {
  const int steps = std::max(1, static_cast<int>(std::ceil(one_norm(k) / 4.0)));
  for (int s = 0; s < steps; ++s) {
    Eigen::MatrixXcd term = m;
    Eigen::MatrixXcd sum = m;
    for (int j = 1; j <= 120; ++j) {
      term = (k * term).eval() / double(steps * j);
      sum += term;
      if (term.norm() <= 1e-16 * sum.norm()) break;
    }
    m = std::move(sum);
  }
  return m;
}

FockState apply_unitary_generator(const FockState& state, const SpMat& gen,
                                  const char* what) {
  FockState out = state;
  if (state.is_pure()) {
    out.pure = exp_action(gen, state.pure);
  } else {
    const Eigen::MatrixXcd half = exp_action(gen, state.rho);
    out.rho = exp_action(gen, half.adjoint()).adjoint();
  }
  const real tail = out.tail_mass();
  if (tail > out.tail_tol) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3e", static_cast<double>(tail));
    throw std::runtime_error(std::string(what) + ": cutoff too small, tail mass = " +
                             buf);
  }
  return out;
}

}  // namespace

FockState FockState::make_vacuum(int n_modes, int cutoff) {
  if (n_modes < 1 || n_modes > 2)
    throw std::invalid_argument("fock: only one or two modes supported");
  if (cutoff < 1) throw std::invalid_argument("fock: cutoff must be >= 1");
  FockState s;
  s.n_modes = n_modes;
  s.cutoff = cutoff;
  s.pure = Eigen::VectorXcd::Zero(dim_of(n_modes, cutoff));
  s.pure(0) = 1.0;
  return s;
}

int FockState::dim() const { return dim_of(n_modes, cutoff); }

Eigen::MatrixXcd FockState::density() const {
  if (is_pure()) return pure * pure.adjoint();
  return rho;
}

Eigen::VectorXd FockState::number_probabilities() const {
  if (is_pure()) return pure.cwiseAbs2();
  return rho.diagonal().real();
}

real FockState::trace() const { return number_probabilities().sum(); }

real FockState::tail_mass() const {
  const Eigen::VectorXd p = number_probabilities();
  const int d = cutoff + 1;
  real mass = 0;
  for (int idx = 0; idx < dim(); ++idx) {
    const int n0 = n_modes == 1 ? idx : idx / d;
    const int n1 = n_modes == 1 ? 0 : idx % d;
    if (n0 == cutoff || (n_modes == 2 && n1 == cutoff)) mass += std::abs(p(idx));
  }
  return mass;
}

void FockState::validate() const {
  const real tr = trace();
  if (!(tr >= 1 - tail_tol - 1e-9L && tr <= 1 + 1e-9L))
    throw std::domain_error("fock state trace outside the truncation budget");
  if (!is_pure()) {
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
      throw std::domain_error("fock density matrix not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho,
                                                           Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -1e-10)
      throw std::domain_error("fock density matrix not positive semidefinite");
  }
}

int suggest_cutoff(real mean_photons, real tail_tol) {
  const real m = std::max<real>(mean_photons, 1e-3L);
  const real ratio = m / (m + 1);
  const int c =
      static_cast<int>(std::ceil(std::log(tail_tol) / std::log(ratio))) - 1;
  return std::max(c, 10);
}

FockState fock_displace(const FockState& state, int mode, real alpha) {
  check_mode(state, mode);
  std::vector<Triplet> gen;
  const double a = static_cast<double>(alpha);
  for (int n = 1; n <= state.cutoff; ++n) {
    const double amp = a * std::sqrt(double(n));
    gen.emplace_back(n, n - 1, amp);    // a^dag
    gen.emplace_back(n - 1, n, -amp);   // -a
  }
  return apply_unitary_generator(
      state, lifted_operator(state.n_modes, state.cutoff, mode, gen), "displace");
}

FockState fock_apply_two_mode_squeezer(const FockState& state, real gain) {
  if (state.n_modes != 2)
    throw std::invalid_argument("two-mode squeezer needs a two-mode state");
  const int d = state.cutoff + 1;
  const double g = static_cast<double>(gain);
  std::vector<Triplet> entries;
  // g * (a0^dag a1^dag - a0 a1)
  for (int n0 = 0; n0 + 1 < d; ++n0)
    for (int n1 = 0; n1 + 1 < d; ++n1) {
      const double amp = g * std::sqrt(double(n0 + 1) * double(n1 + 1));
      entries.emplace_back((n0 + 1) * d + (n1 + 1), n0 * d + n1, amp);
      entries.emplace_back(n0 * d + n1, (n0 + 1) * d + (n1 + 1), -amp);
    }
  SpMat gen(state.dim(), state.dim());
  gen.setFromTriplets(entries.begin(), entries.end());
  return apply_unitary_generator(state, gen, "two_mode_squeezer");
}

FockState fock_apply_single_mode_squeezer(const FockState& state, int mode,
                                          real gain, real phase) {
  check_mode(state, mode);
  const double g2 = static_cast<double>(gain) / 2;
  const Cd eip(std::cos(static_cast<double>(phase)),
               std::sin(static_cast<double>(phase)));
  std::vector<Triplet> gen;
  for (int n = 0; n + 2 <= state.cutoff; ++n) {
    const double amp = g2 * std::sqrt(double(n + 1) * double(n + 2));
    gen.emplace_back(n + 2, n, eip * amp);           // e^{i phi} (a^dag)^2
    gen.emplace_back(n, n + 2, -std::conj(eip) * amp);  // -e^{-i phi} a^2
  }
  return apply_unitary_generator(
      state, lifted_operator(state.n_modes, state.cutoff, mode, gen),
      "single_mode_squeezer");
}

FockState fock_apply_beamsplitter(const FockState& state, real transmissivity,
                                  real phase, bool inverse) {
  if (state.n_modes != 2)
    throw std::invalid_argument("beamsplitter needs a two-mode state");
  if (!(transmissivity >= 0 && transmissivity <= 1))
    throw std::invalid_argument("beamsplitter: transmissivity must lie in [0, 1]");
  const int d = state.cutoff + 1;
  double theta = std::acos(std::sqrt(static_cast<double>(transmissivity)));
  if (inverse) theta = -theta;
  const Cd eip(std::cos(static_cast<double>(phase)),
               std::sin(static_cast<double>(phase)));
  // theta * (e^{i phi} a0^dag a1 - e^{-i phi} a1^dag a0)
  std::vector<Triplet> entries;
  for (int n0 = 0; n0 + 1 < d; ++n0)
    for (int n1 = 1; n1 < d; ++n1) {
      const double amp = theta * std::sqrt(double(n0 + 1) * double(n1));
      entries.emplace_back((n0 + 1) * d + (n1 - 1), n0 * d + n1, eip * amp);
      entries.emplace_back(n0 * d + n1, (n0 + 1) * d + (n1 - 1),
                           -std::conj(eip) * amp);
    }
  SpMat gen(state.dim(), state.dim());
  gen.setFromTriplets(entries.begin(), entries.end());
  return apply_unitary_generator(state, gen, "beamsplitter");
}

FockState fock_apply_loss(const FockState& state, int mode, real eta) {
  check_mode(state, mode);
  if (!(eta > 0 && eta <= 1))
    throw std::invalid_argument("fock loss: eta must lie in (0, 1]");
  if (eta == 1) return state;
  const int d = state.cutoff + 1;
  const double e = static_cast<double>(eta);

  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(state.dim(), state.dim());
  for (int k = 0; k < d; ++k) {
    std::vector<Triplet> single;
    for (int n = k; n < d; ++n) {
      const double log_w = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                           std::lgamma(n - k + 1.0) + (n - k) * std::log(e) +
                           k * std::log1p(-e);
      single.emplace_back(n - k, n, std::exp(0.5 * log_w));
    }
    const SpMat kraus = lifted_operator(state.n_modes, state.cutoff, mode, single);
    if (state.is_pure()) {
      const Eigen::VectorXcd v = kraus * state.pure;
      out.noalias() += v * v.adjoint();
    } else {
      out.noalias() += kraus * state.rho * kraus.adjoint();
    }
  }
  FockState result = state;
  result.pure.resize(0);
  result.rho = std::move(out);
  return result;
}

PhotonStats fock_photon_moments(const FockState& state) {
  const Eigen::VectorXd p = state.number_probabilities();
  const int d = state.cutoff + 1;
  real m0 = 0, m1 = 0, s00 = 0, s11 = 0, s01 = 0;
  for (int idx = 0; idx < state.dim(); ++idx) {
    const real w = p(idx);
    const int n0 = state.n_modes == 1 ? idx : idx / d;
    const int n1 = state.n_modes == 1 ? idx : idx % d;
    m0 += w * n0;
    m1 += w * n1;
    s00 += w * real(n0) * n0;
    s11 += w * real(n1) * n1;
    s01 += w * real(n0) * n1;
  }
  PhotonStats stats;
  stats.mean1 = m0;
  stats.mean2 = m1;
  stats.var1 = s00 - m0 * m0;
  stats.var2 = s11 - m1 * m1;
  stats.cov12 = state.n_modes == 1 ? stats.var1 : s01 - m0 * m1;
  return stats;
}

real trace_distance(const FockState& a, const FockState& b) {
  if (a.dim() != b.dim() || a.n_modes != b.n_modes)
    throw std::invalid_argument("trace_distance: incompatible states");
  const Eigen::MatrixXcd diff = a.density() - b.density();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(diff,
                                                         Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().sum() / 2;
}

namespace {

// Three-mode pure simulator for the amplifier-equivalence check: the probe
// attenuation is carried by an explicit vacuum ancilla (mode 2), so both
// circuit outputs stay pure and their trace distance has the closed form
// sqrt(1 - |<a|b>|^2). Mixed-radix index (n0*d1 + n1)*d2 + n2.
struct ThreeModeDims {
  int d0, d1, d2;
  int total() const { return d0 * d1 * d2; }
};

template <typename EmitFn>
SpMat build_generator(const ThreeModeDims& dims, EmitFn&& emit) {
  std::vector<Triplet> entries;
  for (int n0 = 0; n0 < dims.d0; ++n0)
    for (int n1 = 0; n1 < dims.d1; ++n1)
      for (int n2 = 0; n2 < dims.d2; ++n2) emit(entries, n0, n1, n2);
  SpMat m(dims.total(), dims.total());
  m.setFromTriplets(entries.begin(), entries.end());
  return m;
}

Eigen::VectorXcd apply_gen(const SpMat& gen, const Eigen::VectorXcd& psi) {
  return exp_action(gen, psi);
}

}  // namespace

real verify_amplifier_equivalence(real gain, int cutoff, real phase_offset) {
  const ThreeModeDims dims{cutoff + 1, cutoff + 1, std::min(cutoff + 1, 18)};
  const auto index = [&](int n0, int n1, int n2) {
    return (n0 * dims.d1 + n1) * dims.d2 + n2;
  };
  const double g = static_cast<double>(gain);

  // Pair generators on modes (a, b): g*(a+ b+ - a b) with per-mode level
  // bounds taken from dims.
  const auto tms01 = build_generator(dims, [&](auto& out, int n0, int n1, int n2) {
    if (n0 + 1 >= dims.d0 || n1 + 1 >= dims.d1) return;
    const double amp = g * std::sqrt(double(n0 + 1) * double(n1 + 1));
    out.emplace_back(index(n0 + 1, n1 + 1, n2), index(n0, n1, n2), amp);
    out.emplace_back(index(n0, n1, n2), index(n0 + 1, n1 + 1, n2), -amp);
  });
  const auto bs = [&](int which, real transmissivity, real phase, bool inverse) {
    double theta = std::acos(std::sqrt(static_cast<double>(transmissivity)));
    if (inverse) theta = -theta;
    const Cd eip(std::cos(static_cast<double>(phase)),
                 std::sin(static_cast<double>(phase)));
    // which = 0: modes (0,1); which = 2: modes (0,2) for the loss dilation.
    return build_generator(dims, [&](auto& out, int n0, int n1, int n2) {
      if (which == 0) {
        if (n0 + 1 >= dims.d0 || n1 < 1) return;
        const double amp = theta * std::sqrt(double(n0 + 1) * double(n1));
        out.emplace_back(index(n0 + 1, n1 - 1, n2), index(n0, n1, n2), eip * amp);
        out.emplace_back(index(n0, n1, n2), index(n0 + 1, n1 - 1, n2),
                         -std::conj(eip) * amp);
      } else {
        if (n0 + 1 >= dims.d0 || n2 < 1) return;
        const double amp = theta * std::sqrt(double(n0 + 1) * double(n2));
        out.emplace_back(index(n0 + 1, n1, n2 - 1), index(n0, n1, n2), eip * amp);
        out.emplace_back(index(n0, n1, n2), index(n0 + 1, n1, n2 - 1),
                         -std::conj(eip) * amp);
      }
    });
  };
  const auto sms = [&](int mode, real phase) {
    const Cd eip(std::cos(static_cast<double>(phase)),
                 std::sin(static_cast<double>(phase)));
    return build_generator(dims, [&](auto& out, int n0, int n1, int n2) {
      const int n = mode == 0 ? n0 : n1;
      const int bound = mode == 0 ? dims.d0 : dims.d1;
      if (n + 2 >= bound) return;
      const double amp = 0.5 * g * std::sqrt(double(n + 1) * double(n + 2));
      const auto to = mode == 0 ? index(n0 + 2, n1, n2) : index(n0, n1 + 2, n2);
      out.emplace_back(to, index(n0, n1, n2), eip * amp);
      out.emplace_back(index(n0, n1, n2), to, -std::conj(eip) * amp);
    });
  };

  Eigen::VectorXcd probe = Eigen::VectorXcd::Zero(dims.total());
  probe(0) = 1.0;
  {  // TMSV r = 0.3 on (0,1), then attenuation 0.9 on arm 0 via the ancilla.
    const double r_probe = 0.3;
    const auto tms_probe =
        build_generator(dims, [&](auto& out, int n0, int n1, int n2) {
          if (n0 + 1 >= dims.d0 || n1 + 1 >= dims.d1) return;
          const double amp = r_probe * std::sqrt(double(n0 + 1) * double(n1 + 1));
          out.emplace_back(index(n0 + 1, n1 + 1, n2), index(n0, n1, n2), amp);
          out.emplace_back(index(n0, n1, n2), index(n0 + 1, n1 + 1, n2), -amp);
        });
    probe = apply_gen(tms_probe, probe);
    probe = apply_gen(bs(2, 0.9L, 0, false), probe);
  }

  // The beamsplitter conventions below realize a common squeeze axis at
  // -45 degrees, i.e. single-mode phase -pi/2 on both arms.
  const real half_pi = 1.5707963267948966192L;
  Eigen::VectorXcd direct = apply_gen(sms(0, -half_pi), probe);
  direct = apply_gen(sms(1, -half_pi + phase_offset), direct);

  Eigen::VectorXcd converted = apply_gen(bs(0, 0.5L, half_pi, false), probe);
  converted = apply_gen(tms01, converted);
  converted = apply_gen(bs(0, 0.5L, half_pi, true), converted);

  // Pure-state trace distance sqrt(1 - |<a|b>|^2), evaluated through the
  // orthogonal complement to avoid the cancellation at overlap ~ 1.
  const Cd coeff = direct.dot(converted) / direct.squaredNorm();
  const double residual = (converted - coeff * direct).norm();
  return residual / converted.norm();
}

}  // namespace ssn
