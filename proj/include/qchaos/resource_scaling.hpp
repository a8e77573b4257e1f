#pragma once
/** \file
 * Misclassification rate of the shot-noise-limited regular/chaotic test as a
 * function of system size and shot budget.
 */

#include "qchaos/dqc1.hpp"
#include "qchaos/spectral.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace qchaos {

struct ShotSchedule {
  std::string name;
  /// Shot budget per circuit run for a system of dimension N; empty = exact expectation.
  std::function<std::optional<std::int64_t>(Index)> shots;

  static ShotSchedule constant(std::int64_t shots);
  static ShotSchedule proportional(std::int64_t shots_per_dim);
  static ShotSchedule analytic();
};

struct ScalingStudyConfig {
  std::vector<Index> sizes{64, 256, 1024};
  std::vector<ShotSchedule> schedules;
  Beta regular_ensemble = Beta::poisson;
  Beta chaotic_ensemble = Beta::unitary;
  int trials = 100;
  int delta_n = 6;
  double threshold_c = 2.0;
  FormFactorEstimator estimator = FormFactorEstimator::variance_subtracted;
  ShotModel shot_model = ShotModel::aggregated;
  std::uint64_t seed = 0;
};

struct ScalingCell {
  std::size_t schedule = 0;
  Index dim = 0;
  std::optional<std::int64_t> shots;
  int trials = 0;
  /// Regular samples not judged regular.
  int errors_regular = 0;
  /// Chaotic samples judged regular.
  int errors_chaotic = 0;
  double error_rate = 0;
  double ci_low = 0;
  double ci_high = 0;
};

/// 95% Wilson score interval for `successes` out of `trials`.
std::pair<double, double> wilson_interval(int successes, int trials);

/**
 * Series of DQC1-estimated T_1..T_dn for one operator, clamped into [0, N^2].
 *
 * Each n is an independent circuit run drawing from rng.child(n). The aggregated
 * shot model needs only the phases; per-shot sampling also needs the eigenvectors.
 */
FormFactorSeries<double> dqc1_form_factor_series(const UnitaryEigensystem<double>& eig, int delta_n,
                                                 std::optional<std::int64_t> shots, FormFactorEstimator estimator,
                                                 ShotModel model, const RngStream& rng);

/**
 * For each size and schedule, classify `trials` regular and `trials` chaotic
 * samples from shot-noisy form factors and count errors.
 *
 * A sample is judged regular only on a `regular` verdict of hypothesis_test;
 * chaotic and inconclusive verdicts both count as "not regular". Every schedule
 * sees the same operator samples, and schedules with equal budgets see the
 * same shot noise. Sizes should be powers of two so no padding is involved.
 */
std::vector<ScalingCell> resource_scaling_study(const ScalingStudyConfig& config);

}  // namespace qchaos
