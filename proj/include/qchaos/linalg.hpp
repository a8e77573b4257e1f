#pragma once
/** \file
 * Dense unitary matrices and their eigenphase spectra.
 *
 * Everything here is templated on the real scalar type; `double` is the
 * working precision of the toolkit and the only one the LAPACKE backend
 * accelerates. Eigenvalues of a unitary are written e^{-i phi}, so the
 * eigenphase is the negated argument of the eigenvalue.
 */

#include "qchaos/types.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qchaos {

template <typename Real>
class UnitaryMatrix;

namespace detail {
// Grants library code access to the unchecked constructor for values that are
// unitary by construction (adjoints, block sums of checked blocks).
struct UnitaryAccess {
  template <typename Real>
  static UnitaryMatrix<Real> adopt(CMatrix<Real> m) {
    return UnitaryMatrix<Real>(typename UnitaryMatrix<Real>::Unchecked{}, std::move(m));
  }
};
}  // namespace detail

/// max_{ij} |(M^dagger M - I)_{ij}|
template <typename Derived>
typename Derived::RealScalar unitarity_defect(const Eigen::MatrixBase<Derived>& m) {
  using Matrix = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Matrix gram = m.adjoint() * m;
  return (gram - Matrix::Identity(m.cols(), m.cols())).cwiseAbs().maxCoeff();
}

/**
 * Square complex matrix that satisfied ||U^dagger U - I||_max <= tolerance when built.
 *
 * The public constructor performs the check; instances are immutable afterwards.
 */
template <typename Real>
class UnitaryMatrix {
 public:
  using RealScalar = Real;
  using Scalar = Complex<Real>;
  using MatrixType = CMatrix<Real>;

  /// 1e-10 in double precision; floor of 64 ulps for narrower types.
  static constexpr Real kTolerance = std::max(Real(1e-10), Real(64) * std::numeric_limits<Real>::epsilon());

  explicit UnitaryMatrix(MatrixType entries, Real tolerance = kTolerance) : m_(std::move(entries)) {
    if (m_.rows() != m_.cols()) {
      throw DimensionError("unitary matrix must be square, got " + std::to_string(m_.rows()) + "x" +
                           std::to_string(m_.cols()));
    }
    if (m_.rows() < 1) throw DimensionError("unitary matrix must have dim >= 1");
    if (m_.rows() > kMaxDim) {
      throw DimensionError("dimension " + std::to_string(m_.rows()) + " exceeds cap " + std::to_string(kMaxDim));
    }
    if (!m_.allFinite()) throw UnitarityError("matrix has non-finite entries");
    const Real defect = unitarity_defect(m_);
    if (!(defect <= tolerance)) {
      throw UnitarityError("unitarity defect " + std::to_string(static_cast<double>(defect)) + " exceeds tolerance");
    }
  }

  static UnitaryMatrix identity(Index n) { return UnitaryMatrix(MatrixType::Identity(n, n)); }

  Index dim() const noexcept { return m_.rows(); }
  const MatrixType& matrix() const noexcept { return m_; }
  Scalar operator()(Index row, Index col) const { return m_(row, col); }

 private:
  struct Unchecked {};
  UnitaryMatrix(Unchecked, MatrixType entries) : m_(std::move(entries)) {}
  friend struct detail::UnitaryAccess;

  MatrixType m_;
};

using UnitaryMatrixd = UnitaryMatrix<double>;

/// Maps any real angle onto (-pi, pi]; -pi itself goes to +pi.
template <typename Real>
Real wrap_phase(Real angle) {
  constexpr Real pi = std::numbers::pi_v<Real>;
  Real r = std::remainder(angle, 2 * pi);
  if (r <= -pi) r += 2 * pi;
  if (r > pi) r = pi;
  return r;
}

/// Eigenphase phi of an eigenvalue lambda = e^{-i phi}.
template <typename Real>
Real phase_of_eigenvalue(const Complex<Real>& lambda) {
  return wrap_phase(-std::arg(lambda));
}

/**
 * Ascending list of eigenphases in (-pi, pi].
 *
 * Built from arbitrary real angles, which are wrapped and sorted on entry.
 */
template <typename Real>
class EigenphaseSpectrum {
 public:
  EigenphaseSpectrum() = default;

  explicit EigenphaseSpectrum(RVector<Real> phases) : phases_(std::move(phases)) {
    for (auto& p : phases_) {
      if (!std::isfinite(p)) throw ArgumentError("eigenphase is not finite");
      p = wrap_phase(p);
    }
    std::sort(phases_.begin(), phases_.end());
  }

  explicit EigenphaseSpectrum(std::span<const Real> phases)
      : EigenphaseSpectrum(RVector<Real>(Eigen::Map<const RVector<Real>>(phases.data(), Index(phases.size())))) {}

  Index size() const noexcept { return phases_.size(); }
  Index source_dim() const noexcept { return phases_.size(); }
  const RVector<Real>& phases() const noexcept { return phases_; }
  Real operator[](Index i) const { return phases_[i]; }

 private:
  RVector<Real> phases_;
};

using EigenphaseSpectrumd = EigenphaseSpectrum<double>;

template <typename Real>
UnitaryMatrix<Real> mat_mul(const UnitaryMatrix<Real>& a, const UnitaryMatrix<Real>& b) {
  if (a.dim() != b.dim()) {
    throw DimensionError("mat_mul: " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  }
  return UnitaryMatrix<Real>(a.matrix() * b.matrix());
}

template <typename Real>
UnitaryMatrix<Real> adjoint(const UnitaryMatrix<Real>& u) {
  return detail::UnitaryAccess::adopt<Real>(u.matrix().adjoint());
}

template <typename Real>
Complex<Real> trace(const UnitaryMatrix<Real>& u) {
  return u.matrix().trace();
}

template <typename Real, typename Derived>
CVector<Real> mat_vec(const UnitaryMatrix<Real>& u, const Eigen::MatrixBase<Derived>& v) {
  if (v.cols() != 1 || v.rows() != u.dim()) {
    throw DimensionError("mat_vec: vector of length " + std::to_string(v.rows()) + " for dim " +
                         std::to_string(u.dim()));
  }
  return u.matrix() * v;
}

/// U^n by repeated multiplication (n >= 0); the result is checked once at the end.
template <typename Real>
UnitaryMatrix<Real> matrix_power(const UnitaryMatrix<Real>& u, int n) {
  if (n < 0) throw ArgumentError("matrix_power: negative exponent");
  CMatrix<Real> acc = CMatrix<Real>::Identity(u.dim(), u.dim());
  for (int k = 0; k < n; ++k) acc = acc * u.matrix();
  return UnitaryMatrix<Real>(std::move(acc), Real(1e-9));
}

/// Block-diagonal direct sum of the given unitaries.
template <typename Real>
UnitaryMatrix<Real> direct_sum(std::span<const UnitaryMatrix<Real>> blocks) {
  if (blocks.empty()) throw ArgumentError("direct_sum: no blocks");
  Index total = 0;
  for (const auto& b : blocks) total += b.dim();
  if (total > kMaxDim) throw DimensionError("direct_sum: total dimension exceeds cap");
  CMatrix<Real> m = CMatrix<Real>::Zero(total, total);
  Index offset = 0;
  for (const auto& b : blocks) {
    m.block(offset, offset, b.dim(), b.dim()) = b.matrix();
    offset += b.dim();
  }
  return detail::UnitaryAccess::adopt<Real>(std::move(m));
}

template <typename Real>
UnitaryMatrix<Real> direct_sum(const UnitaryMatrix<Real>& a, const UnitaryMatrix<Real>& b) {
  const std::vector<UnitaryMatrix<Real>> blocks{a, b};
  return direct_sum<Real>(std::span<const UnitaryMatrix<Real>>(blocks));
}

/// Eigenvalues of a unitary as e^{-i phi_j}, from a complex Schur factorization.
template <typename Real>
EigenphaseSpectrum<Real> eigenphases(const UnitaryMatrix<Real>& u) {
  Eigen::ComplexSchur<CMatrix<Real>> schur(u.matrix(), /*computeU=*/false);
  if (schur.info() != Eigen::Success) throw NumericalError("eigenphases: complex Schur iteration did not converge");
  const auto& t = schur.matrixT();
  RVector<Real> phases(u.dim());
  for (Index i = 0; i < u.dim(); ++i) phases[i] = phase_of_eigenvalue<Real>(t(i, i));
  return EigenphaseSpectrum<Real>(std::move(phases));
}

/**
 * Unitary eigenbasis U = V diag(e^{-i phi}) V^dagger.
 *
 * For a normal matrix the triangular Schur factor is diagonal up to rounding,
 * so the Schur vectors are an orthonormal eigenbasis even across degeneracies.
 * `phases` are unsorted and aligned with the columns of `vectors`.
 */
template <typename Real>
struct UnitaryEigensystem {
  RVector<Real> phases;
  CMatrix<Real> vectors;
};

template <typename Real>
UnitaryEigensystem<Real> eigensystem(const UnitaryMatrix<Real>& u) {
  Eigen::ComplexSchur<CMatrix<Real>> schur(u.matrix(), /*computeU=*/true);
  if (schur.info() != Eigen::Success) throw NumericalError("eigensystem: complex Schur iteration did not converge");
  UnitaryEigensystem<Real> out;
  out.phases.resize(u.dim());
  for (Index i = 0; i < u.dim(); ++i) out.phases[i] = phase_of_eigenvalue<Real>(schur.matrixT()(i, i));
  out.vectors = schur.matrixU();
  return out;
}

/// sum_j e^{-i n phi_j}
template <typename Real>
Complex<Real> power_trace(const EigenphaseSpectrum<Real>& spectrum, int n) {
  Complex<Real> sum(0, 0);
  for (Index j = 0; j < spectrum.size(); ++j) sum += std::polar(Real(1), -Real(n) * spectrum[j]);
  return sum;
}

}  // namespace qchaos
