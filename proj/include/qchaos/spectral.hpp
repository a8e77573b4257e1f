#pragma once
/** \file
 * Form factors T_n = |sum_j e^{-i n phi_j}|^2 and the statistics built on them:
 * ensemble means, ergodic window averages, the regular/chaotic hypothesis test
 * and the eigenphase random walk.
 */

#include "qchaos/ensembles.hpp"
#include "qchaos/linalg.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace qchaos {

template <typename Real>
Real form_factor(const EigenphaseSpectrum<Real>& spectrum, int n) {
  if (n < 1) throw ArgumentError("form_factor: n must be >= 1");
  return std::norm(power_trace(spectrum, n));
}

/// T_1..T_{n_max} of one spectrum together with the dimension used to normalize them.
template <typename Real>
class FormFactorSeries {
 public:
  FormFactorSeries(RVector<Real> values, Index dim) : values_(std::move(values)), dim_(dim) {
    if (values_.size() < 1) throw ArgumentError("form factor series must be non-empty");
    if (dim_ < 1) throw ArgumentError("form factor series needs dim >= 1");
    const Real cap = Real(dim_) * Real(dim_);
    for (Index i = 0; i < values_.size(); ++i) {
      // Incremental rotation can overshoot the bounds by a few ulps.
      if (!(values_[i] >= -cap * Real(1e-12) && values_[i] <= cap * (1 + Real(1e-12)))) {
        throw ArgumentError("form factor T_" + std::to_string(i + 1) + " outside [0, N^2]");
      }
      values_[i] = std::clamp(values_[i], Real(0), cap);
    }
  }

  int n_max() const noexcept { return static_cast<int>(values_.size()); }
  Index dim() const noexcept { return dim_; }
  const RVector<Real>& values() const noexcept { return values_; }
  /// T_n, 1-based.
  Real at(int n) const {
    if (n < 1 || n > n_max()) throw ArgumentError("form factor index out of range");
    return values_[n - 1];
  }

 private:
  RVector<Real> values_;
  Index dim_;
};

/// All T_n up to n_max in O(N n_max): each e^{-i phi_j} is advanced by one multiplication per step.
template <typename Real>
FormFactorSeries<Real> form_factor_series(const EigenphaseSpectrum<Real>& spectrum, int n_max) {
  if (n_max < 1) throw ArgumentError("form_factor_series: n_max must be >= 1");
  const Index dim = spectrum.size();
  CVector<Real> step(dim);
  for (Index j = 0; j < dim; ++j) step[j] = std::polar(Real(1), -spectrum[j]);
  CVector<Real> current = step;
  RVector<Real> values(n_max);
  for (int n = 1; n <= n_max; ++n) {
    if (n > 1) current = current.cwiseProduct(step);
    values[n - 1] = std::norm(current.sum());
    // Re-anchor every 64 steps so rounding drift in |w_j| stays bounded.
    if (n % 64 == 0) {
      for (Index j = 0; j < dim; ++j) current[j] = std::polar(Real(1), -Real(n) * spectrum[j]);
    }
  }
  return FormFactorSeries<Real>(std::move(values), dim);
}

/**
 * Ensemble-mean form factor.
 *
 * beta = 0 gives N for every n; the chaotic classes use the Wigner-surmise
 * closed forms, valid for 0 < n < N.
 */
template <typename Real = double>
Real wigner_surmise(Beta beta, int n, Index dim) {
  if (n < 1 || Index(n) >= dim) {
    throw ArgumentError("wigner_surmise: need 1 <= n < N (n=" + std::to_string(n) + ", N=" + std::to_string(dim) + ")");
  }
  const Real nn = Real(n);
  const Real big_n = Real(dim);
  switch (beta) {
    case Beta::poisson: return big_n;
    case Beta::orthogonal: {
      Real sum = 0;
      for (int m = 1; m <= n; ++m) sum += Real(1) / (Real(m) + (big_n + 1) / 2);
      return 2 * nn - nn * sum;
    }
    case Beta::unitary: return nn;
    case Beta::symplectic: {
      Real sum = 0;
      for (int m = 1; m <= n; ++m) sum += Real(1) / (big_n + Real(0.5) - Real(m));
      return nn + nn / 2 * sum;
    }
  }
  throw ArgumentError("wigner_surmise: invalid beta");
}

template <typename Real = double>
Real wigner_surmise(int beta, int n, Index dim) {
  return wigner_surmise<Real>(beta_from_int(beta), n, dim);
}

/// Inclusive range of form-factor indices [lo, hi].
struct Window {
  int lo = 1;
  int hi = 1;
  int length() const { return hi - lo + 1; }
};

/// (1/dn) sum_{n in window} T_n / mean_n, with the mean taken from the hypothesised class.
template <typename Real>
Real ergodic_average(const FormFactorSeries<Real>& series, Beta hypothesis, Window window) {
  if (window.lo < 1 || window.hi < window.lo || window.hi > series.n_max()) {
    throw ArgumentError("ergodic_average: window [" + std::to_string(window.lo) + ", " + std::to_string(window.hi) +
                        "] outside 1.." + std::to_string(series.n_max()));
  }
  Real sum = 0;
  for (int n = window.lo; n <= window.hi; ++n) {
    const Real mean = hypothesis == Beta::poisson ? Real(series.dim()) : wigner_surmise<Real>(hypothesis, n, series.dim());
    sum += series.at(n) / mean;
  }
  return sum / Real(window.length());
}

/// (1/dn) sum_{n=1}^{dn} T_n / N
template <typename Real>
Real t0_statistic(const FormFactorSeries<Real>& series, int delta_n) {
  return ergodic_average(series, Beta::poisson, Window{1, delta_n});
}

/// (1/dn) sum_{n=1}^{dn} T_n / n
template <typename Real>
Real t1_statistic(const FormFactorSeries<Real>& series, int delta_n) {
  if (delta_n < 1 || delta_n > series.n_max()) throw ArgumentError("t1: window outside series");
  Real sum = 0;
  for (int n = 1; n <= delta_n; ++n) sum += series.at(n) / Real(n);
  return sum / Real(delta_n);
}

enum class Verdict { regular, chaotic, inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::regular: return "regular";
    case Verdict::chaotic: return "chaotic";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

template <typename Real>
struct HypothesisVerdict {
  Real t0 = 0;
  Real t1 = 0;
  int delta_n = 0;
  Real threshold_c = 0;
  Verdict decision = Verdict::inconclusive;
  /// Number of invariant subspaces; set only for chaotic verdicts.
  std::optional<int> k_estimate;
};

struct HypothesisOptions {
  double threshold_c = 3.0;
  /// delta_n may not exceed this fraction of N.
  double max_window_fraction = 0.1;
};

/**
 * Decide whether T_1..T_dn look regular (T_n ~ N) or chaotic (T_n ~ k^2 n).
 *
 * A statistic passes when it lies within c / sqrt(dn) of its hypothesised value.
 * Exactly one of t0, t1 passing decides the class. When both fail, t1 is tried
 * against the k^2-shifted chaotic mean with k = round(sqrt(t1)) >= 2 and
 * k^2 <= N / dn; anything else is inconclusive.
 */
template <typename Real>
HypothesisVerdict<Real> hypothesis_test(const FormFactorSeries<Real>& series, int delta_n,
                                        const HypothesisOptions& opts = {}) {
  if (delta_n < 1 || delta_n > series.n_max()) {
    throw ArgumentError("hypothesis_test: delta_n=" + std::to_string(delta_n) + " outside 1.." +
                        std::to_string(series.n_max()));
  }
  if (Real(delta_n) > Real(opts.max_window_fraction) * Real(series.dim())) {
    throw ArgumentError("hypothesis_test: delta_n=" + std::to_string(delta_n) + " violates delta_n <= " +
                        std::to_string(opts.max_window_fraction) + " N (N=" + std::to_string(series.dim()) + ")");
  }
  if (!(opts.threshold_c > 0)) throw ArgumentError("hypothesis_test: threshold_c must be positive");

  HypothesisVerdict<Real> v;
  v.delta_n = delta_n;
  v.threshold_c = Real(opts.threshold_c);
  v.t0 = t0_statistic(series, delta_n);
  v.t1 = t1_statistic(series, delta_n);

  const Real tol = Real(opts.threshold_c) / std::sqrt(Real(delta_n));
  const bool regular_ok = std::abs(v.t0 - 1) <= tol;
  const bool chaotic_ok = std::abs(v.t1 - 1) <= tol;

  if (regular_ok && !chaotic_ok) {
    v.decision = Verdict::regular;
  } else if (chaotic_ok && !regular_ok) {
    v.decision = Verdict::chaotic;
    v.k_estimate = 1;
  } else if (!regular_ok && !chaotic_ok) {
    const long k = std::lround(std::sqrt(v.t1));
    const Real k2 = Real(k) * Real(k);
    if (k >= 2 && k2 <= Real(series.dim()) / Real(delta_n) && std::abs(v.t1 / k2 - 1) <= tol) {
      v.decision = Verdict::chaotic;
      v.k_estimate = static_cast<int>(k);
    }
  }
  return v;
}

/// Partial sums of the unit vectors (cos phi_j, sin phi_j) over ascending phases; N+1 rows from the origin.
template <typename Real>
Eigen::Matrix<Real, Eigen::Dynamic, 2> eigenphase_walk(const EigenphaseSpectrum<Real>& spectrum) {
  Eigen::Matrix<Real, Eigen::Dynamic, 2> path(spectrum.size() + 1, 2);
  path.row(0).setZero();
  for (Index j = 0; j < spectrum.size(); ++j) {
    path(j + 1, 0) = path(j, 0) + std::cos(spectrum[j]);
    path(j + 1, 1) = path(j, 1) + std::sin(spectrum[j]);
  }
  return path;
}

/**
 * Collapse a Kramers-degenerate spectrum to one phase per doublet.
 *
 * Sorted phases are paired with their neighbour; if the pairing straddles the
 * branch cut at +-pi the cyclically shifted pairing is used instead. Throws
 * NumericalError when no pairing matches within `tolerance`.
 */
template <typename Real>
EigenphaseSpectrum<Real> kramers_reduce(const EigenphaseSpectrum<Real>& spectrum, Real tolerance = Real(1e-6)) {
  const Index n = spectrum.size();
  if (n % 2 != 0) throw NumericalError("kramers_reduce: odd number of eigenphases");
  const auto circ_dist = [](Real a, Real b) { return std::abs(wrap_phase(a - b)); };
  for (Index shift : {Index(0), Index(1)}) {
    RVector<Real> reduced(n / 2);
    bool ok = true;
    for (Index p = 0; p < n / 2 && ok; ++p) {
      const Real a = spectrum[(2 * p + shift) % n];
      const Real b = spectrum[(2 * p + 1 + shift) % n];
      ok = circ_dist(a, b) <= tolerance;
      reduced[p] = wrap_phase(b + wrap_phase(a - b) / 2);
    }
    if (ok) return EigenphaseSpectrum<Real>(std::move(reduced));
  }
  throw NumericalError("kramers_reduce: eigenphases do not pair into doublets");
}

/// Spectrum on which form-factor statistics of a sample are evaluated (doublets collapsed for beta = 4).
template <typename Real>
EigenphaseSpectrum<Real> statistical_spectrum(const UnitaryMatrix<Real>& u, Beta beta) {
  auto spectrum = eigenphases(u);
  return beta == Beta::symplectic ? kramers_reduce(spectrum) : spectrum;
}

}  // namespace qchaos
