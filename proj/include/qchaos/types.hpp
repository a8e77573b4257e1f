#pragma once
/** \file
 * Scalar aliases, dense Eigen types and the error hierarchy shared by every module.
 */

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace qchaos {

using Index = Eigen::Index;

template <typename Real>
using Complex = std::complex<Real>;

template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using CMatrixd = CMatrix<double>;
using CVectord = CVector<double>;
using RVectord = RVector<double>;

/// Largest Hilbert-space dimension any dense operator may have.
inline constexpr Index kMaxDim = 4096;

// Errors. The CLI maps each family onto a distinct exit code.

/// Operand shapes disagree.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A precondition on a value (not a shape) is violated.
struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A matrix failed its unitarity check.
struct UnitarityError : std::domain_error {
  using std::domain_error::domain_error;
};

/// An eigen-solver or matrix function did not converge.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad experiment configuration (unknown key, out-of-range parameter).
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// File could not be read, parsed or written.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace qchaos
