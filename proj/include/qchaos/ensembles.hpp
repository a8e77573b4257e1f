#pragma once
/** \file
 * Samplers for the circular ensembles and the Poisson (uncorrelated) model.
 *
 * beta = 0  diagonal unitary with i.i.d. uniform phases
 * beta = 1  COE, U = W^T W
 * beta = 2  CUE (Haar)
 * beta = 4  CSE, U = W^R W with W^R = J W^T J^T; 2n x 2n for n Kramers doublets
 */

#include "qchaos/linalg.hpp"
#include "qchaos/rng.hpp"

#include <Eigen/QR>

#include <numbers>
#include <random>
#include <string>

namespace qchaos {

/// Dyson index of a symmetry class; 0 denotes the Poisson ensemble.
enum class Beta : int { poisson = 0, orthogonal = 1, unitary = 2, symplectic = 4 };

inline Beta beta_from_int(int b) {
  switch (b) {
    case 0: return Beta::poisson;
    case 1: return Beta::orthogonal;
    case 2: return Beta::unitary;
    case 4: return Beta::symplectic;
    default: throw ArgumentError("beta must be one of {0, 1, 2, 4}, got " + std::to_string(b));
  }
}

inline int to_int(Beta b) { return static_cast<int>(b); }

struct EnsembleSpec {
  Beta beta = Beta::unitary;
  /// Matrix dimension; for beta = 4 the number of Kramers doublets.
  Index dim = 2;

  EnsembleSpec() = default;
  EnsembleSpec(Beta b, Index n) : beta(b), dim(n) {
    if (n < 2) throw ArgumentError("ensemble dimension must be >= 2");
  }

  Index matrix_dim() const { return beta == Beta::symplectic ? 2 * dim : dim; }
};

namespace detail {

inline void check_sample_dim(Index n) {
  if (n < 1) throw ArgumentError("sample dimension must be >= 1");
  if (n > kMaxDim) throw DimensionError("sample dimension exceeds cap");
}

template <typename Real>
CMatrix<Real> ginibre(Index n, SplitMix64& gen) {
  std::normal_distribution<Real> normal(Real(0), Real(1) / std::sqrt(Real(2)));
  CMatrix<Real> z(n, n);
  // Column-major fill keeps the draw order tied to storage order.
  for (Index c = 0; c < n; ++c)
    for (Index r = 0; r < n; ++r) {
      const Real re = normal(gen);
      const Real im = normal(gen);
      z(r, c) = Complex<Real>(re, im);
    }
  return z;
}

}  // namespace detail

template <typename Real = double>
UnitaryMatrix<Real> sample_poisson(Index n, const RngStream& rng) {
  detail::check_sample_dim(n);
  auto gen = rng.engine();
  CMatrix<Real> m = CMatrix<Real>::Zero(n, n);
  for (Index k = 0; k < n; ++k) {
    const Real theta = Real(2) * std::numbers::pi_v<Real> * static_cast<Real>(gen.uniform01());
    m(k, k) = std::polar(Real(1), -theta);
  }
  return UnitaryMatrix<Real>(std::move(m));
}

/// Haar unitary: QR of a Ginibre matrix with the phases of diag(R) divided out.
template <typename Real = double>
UnitaryMatrix<Real> sample_cue(Index n, const RngStream& rng) {
  detail::check_sample_dim(n);
  auto gen = rng.engine();
  const CMatrix<Real> z = detail::ginibre<Real>(n, gen);
  Eigen::HouseholderQR<CMatrix<Real>> qr(z);
  CMatrix<Real> q = qr.householderQ() * CMatrix<Real>::Identity(n, n);
  const auto& packed = qr.matrixQR();
  for (Index k = 0; k < n; ++k) {
    const Complex<Real> rkk = packed(k, k);
    const Real mag = std::abs(rkk);
    q.col(k) *= mag > Real(0) ? rkk / mag : Complex<Real>(1);
  }
  return UnitaryMatrix<Real>(std::move(q));
}

template <typename Real = double>
UnitaryMatrix<Real> sample_coe(Index n, const RngStream& rng) {
  const auto w = sample_cue<Real>(n, rng);
  CMatrix<Real> u = w.matrix().transpose() * w.matrix();
  // Symmetrize away rounding so U = U^T holds to the last bit.
  u = (u + u.transpose().eval()) / Real(2);
  return UnitaryMatrix<Real>(std::move(u));
}

/// The 2n x 2n symplectic form [[0, I], [-I, 0]].
template <typename Real = double>
CMatrix<Real> symplectic_form(Index n) {
  CMatrix<Real> j = CMatrix<Real>::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n).setIdentity();
  j.bottomLeftCorner(n, n) = -CMatrix<Real>::Identity(n, n);
  return j;
}

template <typename Real = double>
UnitaryMatrix<Real> sample_cse(Index doublets, const RngStream& rng) {
  detail::check_sample_dim(doublets);
  if (2 * doublets > kMaxDim) throw DimensionError("sample dimension exceeds cap");
  const auto w = sample_cue<Real>(2 * doublets, rng);
  const CMatrix<Real> j = symplectic_form<Real>(doublets);
  const CMatrix<Real> dual = j * w.matrix().transpose() * j.transpose();
  return UnitaryMatrix<Real>(dual * w.matrix());
}

template <typename Real = double>
UnitaryMatrix<Real> sample(const EnsembleSpec& spec, const RngStream& rng) {
  switch (spec.beta) {
    case Beta::poisson: return sample_poisson<Real>(spec.dim, rng);
    case Beta::orthogonal: return sample_coe<Real>(spec.dim, rng);
    case Beta::unitary: return sample_cue<Real>(spec.dim, rng);
    case Beta::symplectic: return sample_cse<Real>(spec.dim, rng);
  }
  throw ArgumentError("unknown ensemble");
}

}  // namespace qchaos
