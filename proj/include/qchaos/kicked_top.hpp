#pragma once
/** \file
 * Nonlinear kicked top: F = U_z U_y U_x with
 * U_k = exp(-i tau_k J_k^2 / (2j+1) - i alpha_k J_k).
 *
 * Basis order is |j, m> with m running from +j down to -j.
 */

#include "qchaos/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <array>
#include <cmath>
#include <string>

namespace qchaos {

/// Angular momentum quantum number j, stored as the integer 2j.
class Spin {
 public:
  constexpr Spin() = default;

  static Spin from_twice(int two_j) {
    if (two_j < 0) throw ArgumentError("spin: 2j must be non-negative");
    if (two_j + 1 > kMaxDim) throw DimensionError("spin: 2j+1 exceeds dimension cap");
    Spin s;
    s.two_j_ = two_j;
    return s;
  }

  /// Accepts integers and half-integers only.
  static Spin from_value(double j) {
    const double twice = 2 * j;
    if (!std::isfinite(twice) || std::abs(twice - std::round(twice)) > 1e-12) {
      throw ArgumentError("spin: j must be an integer or half-integer, got " + std::to_string(j));
    }
    return from_twice(static_cast<int>(std::lround(twice)));
  }

  constexpr int twice() const noexcept { return two_j_; }
  constexpr double value() const noexcept { return two_j_ / 2.0; }
  constexpr Index dim() const noexcept { return two_j_ + 1; }

  friend constexpr bool operator==(Spin, Spin) = default;

 private:
  int two_j_ = 0;
};

/// Parameter vector p = (alpha_x, alpha_y, alpha_z, tau_x, tau_y, tau_z) together with j.
template <typename Real = double>
struct TopParams {
  Eigen::Matrix<Real, 3, 1> alpha = Eigen::Matrix<Real, 3, 1>::Zero();
  Eigen::Matrix<Real, 3, 1> tau = Eigen::Matrix<Real, 3, 1>::Zero();
  Spin j;

  static TopParams from_vector(const std::array<Real, 6>& p, Spin spin) {
    TopParams out;
    out.alpha << p[0], p[1], p[2];
    out.tau << p[3], p[4], p[5];
    out.j = spin;
    return out;
  }

  std::array<Real, 6> as_vector() const { return {alpha[0], alpha[1], alpha[2], tau[0], tau[1], tau[2]}; }
  Index dim() const { return j.dim(); }
};

/// Regular-regime parameters (0, 0, 1, 0, 0, 10).
template <typename Real = double>
TopParams<Real> regular_params(Spin j) {
  return TopParams<Real>::from_vector({0, 0, 1, 0, 0, 10}, j);
}

/// Chaotic-regime parameters (1.1, 1, 1, 4, 0, 10).
template <typename Real = double>
TopParams<Real> chaotic_params(Spin j) {
  return TopParams<Real>::from_vector({Real(1.1), 1, 1, 4, 0, 10}, j);
}

/// (1 - eps) p_r + eps p_c, componentwise; j must agree.
template <typename Real>
TopParams<Real> interpolate_params(const TopParams<Real>& p_r, const TopParams<Real>& p_c, Real eps) {
  if (!(p_r.j == p_c.j)) throw ArgumentError("interpolate_params: j mismatch");
  if (!(eps >= 0 && eps <= 1)) throw ArgumentError("interpolate_params: eps must lie in [0, 1]");
  TopParams<Real> out;
  out.alpha = (1 - eps) * p_r.alpha + eps * p_c.alpha;
  out.tau = (1 - eps) * p_r.tau + eps * p_c.tau;
  out.j = p_r.j;
  return out;
}

template <typename Real = double>
struct AngularMomentumOps {
  CMatrix<Real> jx;
  CMatrix<Real> jy;
  CMatrix<Real> jz;

  const CMatrix<Real>& operator[](int axis) const { return axis == 0 ? jx : (axis == 1 ? jy : jz); }
};

template <typename Real = double>
AngularMomentumOps<Real> angular_momentum(Spin spin) {
  const Index n = spin.dim();
  const Real j = Real(spin.twice()) / 2;
  CMatrix<Real> jplus = CMatrix<Real>::Zero(n, n);
  CMatrix<Real> jz = CMatrix<Real>::Zero(n, n);
  for (Index a = 0; a < n; ++a) {
    const Real m = j - Real(a);
    jz(a, a) = m;
    // J+ |m> = sqrt(j(j+1) - m(m+1)) |m+1>, and |m+1> sits one row up.
    if (a > 0) jplus(a - 1, a) = std::sqrt(j * (j + 1) - m * (m + 1));
  }
  const CMatrix<Real> jminus = jplus.adjoint();
  AngularMomentumOps<Real> ops;
  ops.jx = (jplus + jminus) / Real(2);
  ops.jy = (jplus - jminus) / Complex<Real>(0, 2);
  ops.jz = std::move(jz);
  return ops;
}

/// exp(-i H) for Hermitian H, via H = V diag(lambda) V^dagger.
template <typename Real>
CMatrix<Real> hermitian_exponential(const CMatrix<Real>& h) {
  if (h.rows() != h.cols()) throw DimensionError("hermitian_exponential: matrix must be square");
  if (h.isDiagonal(Real(0))) {
    CMatrix<Real> u = CMatrix<Real>::Zero(h.rows(), h.cols());
    for (Index a = 0; a < h.rows(); ++a) u(a, a) = std::polar(Real(1), -h(a, a).real());
    return u;
  }
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es(h);
  if (es.info() != Eigen::Success) throw NumericalError("hermitian_exponential: eigen-solver did not converge");
  const CVector<Real> phases = (-Complex<Real>(0, 1) * es.eigenvalues().template cast<Complex<Real>>()).array().exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

/// Generator tau J_k^2 / (2j+1) + alpha J_k of one kick.
template <typename Real>
CMatrix<Real> kick_generator(const CMatrix<Real>& jk, Real alpha, Real tau, Index dim) {
  return tau * (jk * jk) / Real(dim) + alpha * jk;
}

template <typename Real>
UnitaryMatrix<Real> floquet(const TopParams<Real>& params) {
  const Index n = params.dim();
  const auto ops = angular_momentum<Real>(params.j);
  CMatrix<Real> f = CMatrix<Real>::Identity(n, n);
  // U_x acts first.
  for (int axis = 0; axis < 3; ++axis) {
    if (params.alpha[axis] == Real(0) && params.tau[axis] == Real(0)) continue;
    const CMatrix<Real> gen = kick_generator<Real>(ops[axis], params.alpha[axis], params.tau[axis], n);
    f = hermitian_exponential<Real>(gen) * f;
  }
  return UnitaryMatrix<Real>(std::move(f));
}

}  // namespace qchaos
