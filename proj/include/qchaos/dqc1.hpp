#pragma once
/** \file
 * One-clean-qubit trace estimation.
 *
 * The K-qubit register carries G = F^n (+) I_{2^K - N}. With the clean qubit
 * measured after an x (y) rotation, a single run returns +1 with probability
 * (1 + eps Re <m|G|m>) / 2 (resp. Im), where m is the computational basis state
 * the maximally mixed register happened to be in. Averaging over m reproduces
 * eps Tr G / 2^K, which is what a run of many shots estimates.
 *
 * The 2^{K+1}-dimensional density matrix is never formed: each shot draws m
 * uniformly and looks up one diagonal element of G.
 */

#include "qchaos/linalg.hpp"
#include "qchaos/rng.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace qchaos {

/// How each shot's outcome is produced.
enum class ShotModel {
  /// Draw m, then a Bernoulli outcome from <m|G|m>.
  per_shot,
  /// Draw the count of +1 outcomes from its exact binomial law; needs only Tr G.
  aggregated,
};

/// How <m|F^n|m> is obtained.
enum class DiagonalRoute { automatic, mat_vec, eigen };

/// Estimator of T_n / N^2 from a corrected trace estimate.
enum class FormFactorEstimator { raw, variance_subtracted };

/// ceil(log2 N)
inline int qubits_for(Index dim) {
  if (dim < 1) throw ArgumentError("qubits_for: dim must be >= 1");
  int k = 0;
  while ((Index(1) << k) < dim) ++k;
  return k;
}

struct Dqc1Config {
  Index system_dim = 1;
  int num_qubits = 0;
  int power = 1;
  /// Total shot budget, split evenly between the x and y settings; empty = exact expectation.
  std::optional<std::int64_t> shots;
  double epsilon = 1.0;
  /// Number of independent shot partitions; fixes the random plan together with the seed.
  int partitions = 1;
  ShotModel shot_model = ShotModel::per_shot;
  DiagonalRoute route = DiagonalRoute::automatic;

  static Dqc1Config for_dim(Index dim, int power = 1, std::optional<std::int64_t> shots = std::nullopt) {
    Dqc1Config c;
    c.system_dim = dim;
    c.num_qubits = qubits_for(dim);
    c.power = power;
    c.shots = shots;
    return c;
  }

  bool analytic() const noexcept { return !shots.has_value(); }
  Index padded_dim() const { return Index(1) << num_qubits; }

  void validate() const {
    if (system_dim < 1) throw ArgumentError("dqc1: system dimension must be >= 1");
    if (num_qubits < 0 || num_qubits > 30) throw ArgumentError("dqc1: num_qubits out of range");
    if (padded_dim() < system_dim) {
      throw DimensionError("dqc1: dimension " + std::to_string(system_dim) + " exceeds 2^K = " +
                           std::to_string(padded_dim()));
    }
    if (power < 1) throw ArgumentError("dqc1: power must be >= 1");
    if (shots && *shots < 1) throw ArgumentError("dqc1: shots must be >= 1");
    if (!(epsilon > 0 && epsilon <= 1)) throw ArgumentError("dqc1: epsilon must lie in (0, 1]");
    if (partitions < 1) throw ArgumentError("dqc1: partitions must be >= 1");
  }
};

template <typename Real = double>
struct TraceEstimate {
  Real re = 0;
  Real im = 0;
  Real std_error_re = 0;
  Real std_error_im = 0;
  std::int64_t shots_used = 0;
};

/// Estimate of Tr F^n / N after the padding contribution has been removed.
template <typename Real = double>
struct CorrectedTrace {
  Real re = 0;
  Real im = 0;
  Real std_error_re = 0;
  Real std_error_im = 0;
};

/// <m|F^n|m> for every m by applying F n times to each basis vector.
template <typename Real>
CVector<Real> power_diagonal_mat_vec(const UnitaryMatrix<Real>& f, int n) {
  const Index dim = f.dim();
  CVector<Real> diag(dim);
  for (Index m = 0; m < dim; ++m) {
    CVector<Real> v = CVector<Real>::Unit(dim, m);
    for (int k = 0; k < n; ++k) v = mat_vec(f, v);
    diag[m] = v[m];
  }
  return diag;
}

/// <m|F^n|m> = sum_j |V_mj|^2 e^{-i n phi_j}
template <typename Real>
CVector<Real> power_diagonal_eigen(const UnitaryEigensystem<Real>& es, int n) {
  CVector<Real> rotated(es.phases.size());
  for (Index j = 0; j < es.phases.size(); ++j) rotated[j] = std::polar(Real(1), -Real(n) * es.phases[j]);
  return es.vectors.cwiseAbs2().template cast<Complex<Real>>() * rotated;
}

template <typename Real>
CVector<Real> power_diagonal(const UnitaryMatrix<Real>& f, int n, DiagonalRoute route = DiagonalRoute::automatic) {
  if (n < 1) throw ArgumentError("power_diagonal: n must be >= 1");
  if (route == DiagonalRoute::automatic) route = n <= 8 ? DiagonalRoute::mat_vec : DiagonalRoute::eigen;
  if (route == DiagonalRoute::mat_vec) return power_diagonal_mat_vec(f, n);
  return power_diagonal_eigen(eigensystem(f), n);
}

namespace detail {

// Shots [begin, end) of a setting with `total` shots split over `parts` partitions.
inline std::pair<std::int64_t, std::int64_t> partition_range(std::int64_t total, int parts, int p) {
  const std::int64_t base = total / parts;
  const std::int64_t extra = total % parts;
  const std::int64_t begin = p * base + std::min<std::int64_t>(p, extra);
  return {begin, begin + base + (p < extra ? 1 : 0)};
}

struct SettingTally {
  std::int64_t plus = 0;
  std::int64_t count = 0;
};

template <typename Real>
Real tally_mean(const SettingTally& t) {
  return t.count == 0 ? Real(0) : Real(2 * t.plus - t.count) / Real(t.count);
}

template <typename Real>
Real tally_std_error(const SettingTally& t) {
  // A setting with no shots carries no information; report the widest possible error.
  if (t.count == 0) return Real(1);
  const Real mean = tally_mean<Real>(t);
  const Real pop_var = std::max(Real(0), 1 - mean * mean);
  const Real var = t.count > 1 ? pop_var * Real(t.count) / Real(t.count - 1) : pop_var;
  return std::sqrt(var / Real(t.count));
}

template <typename Real>
TraceEstimate<Real> finish(const SettingTally& x, const SettingTally& y) {
  TraceEstimate<Real> est;
  est.re = tally_mean<Real>(x);
  est.im = tally_mean<Real>(y);
  est.std_error_re = tally_std_error<Real>(x);
  est.std_error_im = tally_std_error<Real>(y);
  est.shots_used = x.count + y.count;
  return est;
}

inline std::int64_t shots_x(std::int64_t total) { return (total + 1) / 2; }

}  // namespace detail

/// Estimate from Tr G alone; valid for analytic runs and the aggregated shot model.
template <typename Real>
TraceEstimate<Real> simulate_dqc1_from_trace(const Complex<Real>& padded_trace, const Dqc1Config& config,
                                             const RngStream& rng) {
  config.validate();
  const Real scale = Real(config.epsilon) / Real(config.padded_dim());
  const Real signal_re = scale * padded_trace.real();
  const Real signal_im = scale * padded_trace.imag();
  if (config.analytic()) {
    TraceEstimate<Real> est;
    est.re = signal_re;
    est.im = signal_im;
    return est;
  }
  if (config.shot_model != ShotModel::aggregated) {
    throw ArgumentError("simulate_dqc1_from_trace: per-shot sampling needs the diagonal of G");
  }
  const std::int64_t total_x = detail::shots_x(*config.shots);
  const std::int64_t total_y = *config.shots - total_x;
  const auto clamp_p = [](Real p) { return std::clamp<double>(static_cast<double>(p), 0.0, 1.0); };
  detail::SettingTally x, y;
  for (int p = 0; p < config.partitions; ++p) {
    auto gen = rng.child(std::uint64_t(p)).engine();
    const auto [bx, ex] = detail::partition_range(total_x, config.partitions, p);
    const auto [by, ey] = detail::partition_range(total_y, config.partitions, p);
    if (ex > bx) {
      std::binomial_distribution<std::int64_t> draw(ex - bx, clamp_p((1 + signal_re) / 2));
      x.plus += draw(gen);
      x.count += ex - bx;
    }
    if (ey > by) {
      std::binomial_distribution<std::int64_t> draw(ey - by, clamp_p((1 + signal_im) / 2));
      y.plus += draw(gen);
      y.count += ey - by;
    }
  }
  return detail::finish<Real>(x, y);
}

/**
 * Run the circuit given the diagonal of G (length 2^K).
 *
 * Shot partitions are independent: partition p draws from rng.child(p), so the
 * result depends only on (rng, partitions), not on execution order.
 */
template <typename Real>
TraceEstimate<Real> simulate_dqc1(const CVector<Real>& g_diagonal, const Dqc1Config& config, const RngStream& rng) {
  config.validate();
  if (g_diagonal.size() != config.padded_dim()) {
    throw DimensionError("simulate_dqc1: diagonal length " + std::to_string(g_diagonal.size()) + " != 2^K");
  }
  if (config.analytic() || config.shot_model == ShotModel::aggregated) {
    return simulate_dqc1_from_trace<Real>(g_diagonal.sum(), config, rng);
  }
  const Real eps = Real(config.epsilon);
  const std::int64_t total_x = detail::shots_x(*config.shots);
  const std::int64_t total_y = *config.shots - total_x;
  const std::uint64_t reg = std::uint64_t(config.padded_dim());

  std::vector<detail::SettingTally> xs(config.partitions), ys(config.partitions);
#pragma omp parallel for schedule(static)
  for (int p = 0; p < config.partitions; ++p) {
    auto gen = rng.child(std::uint64_t(p)).engine();
    const auto run = [&](std::int64_t count, bool real_part, detail::SettingTally& tally) {
      for (std::int64_t s = 0; s < count; ++s) {
        const auto m = static_cast<Index>(gen() % reg);
        const Complex<Real> d = g_diagonal[m];
        const Real prob_plus = (1 + eps * (real_part ? d.real() : d.imag())) / 2;
        tally.plus += gen.uniform01() < prob_plus ? 1 : 0;
        tally.count += 1;
      }
    };
    const auto [bx, ex] = detail::partition_range(total_x, config.partitions, p);
    const auto [by, ey] = detail::partition_range(total_y, config.partitions, p);
    run(ex - bx, true, xs[p]);
    run(ey - by, false, ys[p]);
  }
  detail::SettingTally x, y;
  for (int p = 0; p < config.partitions; ++p) {
    x.plus += xs[p].plus;
    x.count += xs[p].count;
    y.plus += ys[p].plus;
    y.count += ys[p].count;
  }
  return detail::finish<Real>(x, y);
}

/// diag(F^n) followed by 2^K - N ones from the identity padding.
template <typename Real>
CVector<Real> padded_diagonal(const CVector<Real>& f_diagonal, int num_qubits) {
  const Index padded = Index(1) << num_qubits;
  if (f_diagonal.size() > padded) throw DimensionError("padded_diagonal: dimension exceeds 2^K");
  CVector<Real> g = CVector<Real>::Ones(padded);
  g.head(f_diagonal.size()) = f_diagonal;
  return g;
}

template <typename Real>
TraceEstimate<Real> dqc1_estimate(const UnitaryMatrix<Real>& f, const Dqc1Config& config, const RngStream& rng) {
  config.validate();
  if (f.dim() != config.system_dim) {
    throw DimensionError("dqc1_estimate: operator dim " + std::to_string(f.dim()) + " != configured N " +
                         std::to_string(config.system_dim));
  }
  const CVector<Real> diag = power_diagonal(f, config.power, config.route);
  return simulate_dqc1(padded_diagonal(diag, config.num_qubits), config, rng);
}

/// Remove the identity padding and rescale: (re 2^K / eps - (2^K - N)) / N, im 2^K / (eps N).
/// The padding enters the raw signal scaled by eps like everything else, so it is subtracted after dividing eps out.
template <typename Real>
CorrectedTrace<Real> padding_correction(const TraceEstimate<Real>& est, Index system_dim, int num_qubits,
                                        double epsilon = 1.0) {
  const Index padded = Index(1) << num_qubits;
  if (system_dim < 1 || padded < system_dim) throw DimensionError("padding_correction: N exceeds 2^K");
  if (!(epsilon > 0 && epsilon <= 1)) throw ArgumentError("padding_correction: epsilon must lie in (0, 1]");
  const Real scale = Real(padded) / (Real(epsilon) * Real(system_dim));
  const Real pad = Real(padded - system_dim) / Real(system_dim);
  CorrectedTrace<Real> c;
  c.re = est.re * scale - pad;
  c.im = est.im * scale;
  c.std_error_re = est.std_error_re * scale;
  c.std_error_im = est.std_error_im * scale;
  return c;
}

template <typename Real>
CorrectedTrace<Real> padding_correction(const TraceEstimate<Real>& est, const Dqc1Config& config) {
  return padding_correction(est, config.system_dim, config.num_qubits, config.epsilon);
}

/// |Tr F^n / N|^2 estimated from a corrected trace, i.e. T_n / N^2.
template <typename Real>
Real normalized_form_factor(const CorrectedTrace<Real>& c, FormFactorEstimator estimator) {
  Real value = c.re * c.re + c.im * c.im;
  if (estimator == FormFactorEstimator::variance_subtracted) {
    value -= c.std_error_re * c.std_error_re + c.std_error_im * c.std_error_im;
  }
  return value;
}

/// T_n / N^2 from one circuit run; stochastic runs default to the variance-subtracted estimator.
template <typename Real>
Real form_factor_from_dqc1(const UnitaryMatrix<Real>& f, const Dqc1Config& config, const RngStream& rng,
                           std::optional<FormFactorEstimator> estimator = std::nullopt) {
  const auto est = dqc1_estimate(f, config, rng);
  const auto which = estimator.value_or(config.analytic() ? FormFactorEstimator::raw
                                                          : FormFactorEstimator::variance_subtracted);
  return normalized_form_factor(padding_correction(est, config), which);
}

}  // namespace qchaos
