#include "ssn/gaussian.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace ssn {

namespace {

using Complex = std::complex<real>;
using ComplexMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;

void check_finite(const RealMatrix& m, const char* what) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (!std::isfinite(static_cast<double>(m(i, j))))
        throw std::invalid_argument(std::string(what) + " has non-finite entries");
}

// Quadrature 2x2 block representing multiplication of a mode operator by a
// complex coefficient u: x' = Re(u) x - Im(u) p, p' = Im(u) x + Re(u) p.
void put_complex_block(RealMatrix& X, int row_mode, int col_mode, Complex u) {
  const int r = 2 * row_mode, c = 2 * col_mode;
  X(r, c) += u.real();
  X(r, c + 1) += -u.imag();
  X(r + 1, c) += u.imag();
  X(r + 1, c + 1) += u.real();
}

// Block for a coefficient of the conjugated operator a^dag:
// u*a^dag contributes x' = Re(u) x + Im(u) p, p' = Im(u) x - Re(u) p.
void put_conjugate_block(RealMatrix& X, int row_mode, int col_mode, Complex u) {
  const int r = 2 * row_mode, c = 2 * col_mode;
  X(r, c) += u.real();
  X(r, c + 1) += u.imag();
  X(r + 1, c) += u.imag();
  X(r + 1, c + 1) += -u.real();
}

GaussianChannel unitary_channel(RealMatrix X) {
  GaussianChannel ch;
  ch.Y = RealMatrix::Zero(X.rows(), X.cols());
  ch.shift = RealVector::Zero(X.rows());
  ch.X = std::move(X);
  ch.validate();
  return ch;
}

}  // namespace

void PhotonStats::validate() const {
  // Tolerances scale with the natural size of the moments so the checks
  // stay meaningful for both near-vacuum and strongly amplified states.
  const real var_scale =
      std::max({real(1), mean1 + mean1 * mean1, mean2 + mean2 * mean2});
  if (var1 < -tol::cauchy_schwarz * var_scale ||
      var2 < -tol::cauchy_schwarz * var_scale)
    throw std::domain_error("photon statistics: negative variance");
  const real cs_scale = std::max<real>(1, var1 * var2);
  if (cov12 * cov12 > var1 * var2 + tol::cauchy_schwarz * cs_scale)
    throw std::domain_error("photon statistics: Cauchy-Schwarz violated");
}

RealMatrix symplectic_form(int n_modes) {
  RealMatrix omega = RealMatrix::Zero(2 * n_modes, 2 * n_modes);
  for (int k = 0; k < n_modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1;
    omega(2 * k + 1, 2 * k) = -1;
  }
  return omega;
}

std::vector<real> symplectic_eigenvalues(const RealMatrix& cov) {
  const int n = static_cast<int>(cov.rows()) / 2;
  // Factor sigma = W W^T with W = V sqrt(D); eig(Omega*sigma) is similar to
  // eig(W^T Omega W), and i W^T Omega W is Hermitian. Because Omega pairs
  // squeezed with anti-squeezed directions, W^T Omega W stays of the order
  // of the symplectic eigenvalues themselves, so the eigenvalue error does
  // not inherit the covariance scale.
  Eigen::SelfAdjointEigenSolver<RealMatrix> factor(cov);
  const real scale = std::max<real>(1, cov.cwiseAbs().maxCoeff());
  RealVector d = factor.eigenvalues();
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (d(i) < -1e3 * std::numeric_limits<real>::epsilon() * scale)
      throw std::domain_error("covariance is not positive semidefinite");
    d(i) = std::sqrt(std::max<real>(d(i), 0));
  }
  const RealMatrix w = factor.eigenvectors() * d.asDiagonal();
  ComplexMatrix m =
      (w.transpose() * symplectic_form(n) * w).cast<Complex>() * Complex(0, 1);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
  // Spectrum is +-nu_k; keep the nonnegative half.
  std::vector<real> nus;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
    if (solver.eigenvalues()(i) >= 0) nus.push_back(solver.eigenvalues()(i));
  return nus;
}

void GaussianState::validate() const {
  if (n_modes < 1) throw std::invalid_argument("state needs at least one mode");
  if (mean.size() != 2 * n_modes || cov.rows() != 2 * n_modes || cov.cols() != 2 * n_modes)
    throw std::invalid_argument("state dimensions inconsistent");
  check_finite(cov, "covariance");
  for (int i = 0; i < 2 * n_modes; ++i)
    if (!std::isfinite(static_cast<double>(mean(i))))
      throw std::invalid_argument("mean has non-finite entries");
  const real scale = std::max<real>(1, cov.cwiseAbs().maxCoeff());
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > tol::cov_symmetry * scale)
    throw std::domain_error("covariance not symmetric");
  // The small symplectic eigenvalue of a strongly squeezed covariance is
  // only determined to about 1e-11 * ||cov|| by the stored entries (its
  // information sits in cancellations of O(scale) terms), so the floor
  // widens with the scale; O(1) states keep the strict 1e-9 floor.
  const real slack = std::max(tol::symplectic_floor, 3e-11L * scale);
  for (real nu : symplectic_eigenvalues(cov))
    if (nu < kVacuumVariance - slack)
      throw std::domain_error("covariance violates the uncertainty relation");
}

bool GaussianChannel::is_unitary() const {
  if (Y.cwiseAbs().maxCoeff() > tol::unitary_symplectic) return false;
  const int n = n_modes();
  const RealMatrix omega = symplectic_form(n);
  return (X * omega * X.transpose() - omega).cwiseAbs().maxCoeff() <=
         tol::unitary_symplectic;
}

void GaussianChannel::validate() const {
  if (X.rows() % 2 != 0 || X.cols() % 2 != 0)
    throw std::invalid_argument("channel dimensions must be even");
  if (Y.rows() != X.rows() || Y.cols() != X.rows() || shift.size() != X.rows())
    throw std::invalid_argument("channel dimensions inconsistent");
  check_finite(X, "X");
  check_finite(Y, "Y");
  if ((Y - Y.transpose()).cwiseAbs().maxCoeff() > tol::cov_symmetry)
    throw std::domain_error("Y not symmetric");
  // Complete positivity: Y + (i/2) Omega_out - (i/2) X Omega_in X^T >= 0.
  const int n_out = static_cast<int>(X.rows()) / 2;
  const int n_in = static_cast<int>(X.cols()) / 2;
  ComplexMatrix m = Y.cast<Complex>();
  const Complex half_i(0, 0.5L);
  m += half_i * (symplectic_form(n_out).cast<Complex>() -
                 (X * symplectic_form(n_in) * X.transpose()).cast<Complex>());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -tol::cp_condition)
    throw std::domain_error("channel is not completely positive");
}

GaussianState vacuum(int n_modes) {
  if (n_modes < 1) throw std::invalid_argument("vacuum: n_modes must be >= 1");
  GaussianState s;
  s.n_modes = n_modes;
  s.mean = RealVector::Zero(2 * n_modes);
  s.cov = kVacuumVariance * RealMatrix::Identity(2 * n_modes, 2 * n_modes);
  return s;
}

GaussianState displace(const GaussianState& state, int mode, real alpha) {
  if (mode < 0 || mode >= state.n_modes)
    throw std::out_of_range("displace: mode index out of range");
  GaussianState out = state;
  out.mean(2 * mode) += std::sqrt(real(2)) * alpha;
  return out;
}

GaussianChannel single_mode_squeezer(real gain) {
  if (!std::isfinite(static_cast<double>(gain)))
    throw std::invalid_argument("squeezer gain must be finite");
  RealMatrix X(2, 2);
  X << std::exp(gain), 0, 0, std::exp(-gain);
  return unitary_channel(std::move(X));
}

GaussianChannel phase_shift(real theta) {
  RealMatrix X(2, 2);
  X << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return unitary_channel(std::move(X));
}

GaussianChannel two_mode_squeezer(real gain) {
  if (!std::isfinite(static_cast<double>(gain)))
    throw std::invalid_argument("squeezer gain must be finite");
  const real c = std::cosh(gain), s = std::sinh(gain);
  RealMatrix X = RealMatrix::Zero(4, 4);
  put_complex_block(X, 0, 0, c);
  put_conjugate_block(X, 0, 1, s);
  put_complex_block(X, 1, 1, c);
  put_conjugate_block(X, 1, 0, s);
  return unitary_channel(std::move(X));
}

GaussianChannel loss_channel(real eta) {
  if (!(eta > 0 && eta <= 1))
    throw std::invalid_argument("loss: eta must lie in (0, 1]");
  GaussianChannel ch;
  ch.X = std::sqrt(eta) * RealMatrix::Identity(2, 2);
  ch.Y = ((1 - eta) * kVacuumVariance) * RealMatrix::Identity(2, 2);
  ch.shift = RealVector::Zero(2);
  ch.validate();
  return ch;
}

GaussianChannel beamsplitter(real transmissivity, real phase) {
  if (!(transmissivity >= 0 && transmissivity <= 1))
    throw std::invalid_argument("beamsplitter: transmissivity must lie in [0, 1]");
  const real t = std::sqrt(transmissivity);
  const real rfl = std::sqrt(1 - transmissivity);
  const Complex eip(std::cos(phase), std::sin(phase));
  RealMatrix X = RealMatrix::Zero(4, 4);
  put_complex_block(X, 0, 0, t);
  put_complex_block(X, 0, 1, eip * rfl);
  put_complex_block(X, 1, 0, -std::conj(eip) * rfl);
  put_complex_block(X, 1, 1, t);
  return unitary_channel(std::move(X));
}

GaussianChannel inverse_unitary(const GaussianChannel& channel) {
  if (!channel.is_unitary())
    throw std::invalid_argument("inverse requested for a non-unitary channel");
  GaussianChannel inv;
  inv.X = channel.X.inverse();
  inv.Y = RealMatrix::Zero(channel.X.rows(), channel.X.rows());
  inv.shift = -inv.X * channel.shift;
  inv.validate();
  return inv;
}

GaussianState apply(const GaussianChannel& channel, const GaussianState& state,
                    const std::vector<int>& modes) {
  const int k = channel.n_modes();
  if (static_cast<int>(modes.size()) != k)
    throw std::invalid_argument("apply: channel arity does not match mode list");
  for (size_t i = 0; i < modes.size(); ++i) {
    if (modes[i] < 0 || modes[i] >= state.n_modes)
      throw std::out_of_range("apply: mode index out of range");
    for (size_t j = i + 1; j < modes.size(); ++j)
      if (modes[i] == modes[j])
        throw std::invalid_argument("apply: repeated mode index");
  }
  const int dim = 2 * state.n_modes;
  RealMatrix xfull = RealMatrix::Identity(dim, dim);
  RealMatrix yfull = RealMatrix::Zero(dim, dim);
  RealVector sfull = RealVector::Zero(dim);
  for (int i = 0; i < k; ++i) {
    sfull.segment<2>(2 * modes[i]) = channel.shift.segment<2>(2 * i);
    for (int j = 0; j < k; ++j) {
      xfull.block<2, 2>(2 * modes[i], 2 * modes[j]) = channel.X.block<2, 2>(2 * i, 2 * j);
      yfull.block<2, 2>(2 * modes[i], 2 * modes[j]) = channel.Y.block<2, 2>(2 * i, 2 * j);
    }
  }
  GaussianState out;
  out.n_modes = state.n_modes;
  out.mean = xfull * state.mean + sfull;
  out.cov = xfull * state.cov * xfull.transpose() + yfull;
  out.cov = ((out.cov + out.cov.transpose()) / 2).eval();
  return out;
}

PhotonStats photon_moments(const GaussianState& state, int mode_a, int mode_b) {
  if (mode_a < 0 || mode_a >= state.n_modes || mode_b < 0 || mode_b >= state.n_modes)
    throw std::out_of_range("photon_moments: mode index out of range");
  state.validate();

  const auto alpha = [&](int m) {
    return Complex(state.mean(2 * m), state.mean(2 * m + 1)) / std::sqrt(real(2));
  };
  const auto nu = [&](int i, int j) {
    const real re = state.cov(2 * i, 2 * j) + state.cov(2 * i + 1, 2 * j + 1) -
                    (i == j ? real(1) : real(0));
    const real im = state.cov(2 * i, 2 * j + 1) - state.cov(2 * i + 1, 2 * j);
    return Complex(re, im) / real(2);
  };
  const auto mu = [&](int i, int j) {
    const real re = state.cov(2 * i, 2 * j) - state.cov(2 * i + 1, 2 * j + 1);
    const real im = state.cov(2 * i, 2 * j + 1) + state.cov(2 * i + 1, 2 * j);
    return Complex(re, im) / real(2);
  };
  const auto mean_n = [&](int m) {
    return std::norm(alpha(m)) + nu(m, m).real();
  };
  const auto cov_n = [&](int i, int j) {
    const Complex ai = alpha(i), aj = alpha(j);
    const Complex mij = mu(i, j), nij = nu(i, j), nji = nu(j, i);
    real c = 2 * (std::conj(ai) * std::conj(aj) * mij).real() +
             2 * (std::conj(ai) * aj * nji).real() +
             std::norm(mij) + std::norm(nij);
    if (i == j) c += std::norm(ai) + nu(i, i).real();
    return c;
  };

  PhotonStats out;
  out.mean1 = mean_n(mode_a);
  out.var1 = cov_n(mode_a, mode_a);
  if (mode_a == mode_b) {
    out.mean2 = out.mean1;
    out.var2 = out.var1;
    out.cov12 = out.var1;
  } else {
    out.mean2 = mean_n(mode_b);
    out.var2 = cov_n(mode_b, mode_b);
    out.cov12 = cov_n(mode_a, mode_b);
  }
  out.validate();
  return out;
}

PhotonStats detected_moments(const PhotonStats& stats, real eta_d) {
  if (!(eta_d > 0 && eta_d <= 1))
    throw std::invalid_argument("detected_moments: eta_d must lie in (0, 1]");
  const real eps2 = (1 - eta_d) / eta_d;
  PhotonStats out;
  out.mean1 = eta_d * stats.mean1;
  out.mean2 = eta_d * stats.mean2;
  out.var1 = eta_d * eta_d * (stats.var1 + eps2 * stats.mean1);
  out.var2 = eta_d * eta_d * (stats.var2 + eps2 * stats.mean2);
  out.cov12 = eta_d * eta_d * stats.cov12;
  return out;
}

}  // namespace ssn
