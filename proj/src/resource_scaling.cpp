#include "qchaos/resource_scaling.hpp"

#include "qchaos/ensembles.hpp"

#include <algorithm>
#include <array>
#include <tuple>
#include <cmath>

namespace qchaos {

ShotSchedule ShotSchedule::constant(std::int64_t shots) {
  return {"constant", [shots](Index) -> std::optional<std::int64_t> { return shots; }};
}

ShotSchedule ShotSchedule::proportional(std::int64_t shots_per_dim) {
  return {"proportional", [shots_per_dim](Index n) -> std::optional<std::int64_t> { return shots_per_dim * n; }};
}

ShotSchedule ShotSchedule::analytic() {
  return {"analytic", [](Index) -> std::optional<std::int64_t> { return std::nullopt; }};
}

std::pair<double, double> wilson_interval(int successes, int trials) {
  if (trials <= 0) return {0.0, 1.0};
  constexpr double z = 1.959963984540054;
  const double n = trials;
  const double p = successes / n;
  const double denom = 1 + z * z / n;
  const double centre = (p + z * z / (2 * n)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

FormFactorSeries<double> dqc1_form_factor_series(const UnitaryEigensystem<double>& eig, int delta_n,
                                                 std::optional<std::int64_t> shots, FormFactorEstimator estimator,
                                                 ShotModel model, const RngStream& rng) {
  const Index dim = eig.phases.size();
  auto config = Dqc1Config::for_dim(dim, 1, shots);
  config.shot_model = model;
  const bool need_diagonal = shots.has_value() && model == ShotModel::per_shot;
  if (need_diagonal && eig.vectors.rows() != dim) {
    throw ArgumentError("dqc1_form_factor_series: per-shot sampling needs eigenvectors");
  }
  const double cap = double(dim) * double(dim);
  RVectord values(delta_n);
  for (int n = 1; n <= delta_n; ++n) {
    config.power = n;
    TraceEstimate<double> est;
    if (need_diagonal) {
      est = simulate_dqc1(padded_diagonal(power_diagonal_eigen(eig, n), config.num_qubits), config, rng.child(n));
    } else {
      Complex<double> tr(0, 0);
      for (Index j = 0; j < dim; ++j) tr += std::polar(1.0, -double(n) * eig.phases[j]);
      tr += double(config.padded_dim() - dim);
      est = simulate_dqc1_from_trace(tr, config, rng.child(n));
    }
    const double t = normalized_form_factor(padding_correction(est, config), estimator) * cap;
    values[n - 1] = std::clamp(t, 0.0, cap);
  }
  return FormFactorSeries<double>(std::move(values), dim);
}

std::vector<ScalingCell> resource_scaling_study(const ScalingStudyConfig& config) {
  if (config.trials < 1) throw ArgumentError("resource_scaling_study: trials must be >= 1");
  if (config.schedules.empty()) throw ArgumentError("resource_scaling_study: no shot schedules");
  if (config.regular_ensemble == Beta::symplectic || config.chaotic_ensemble == Beta::symplectic) {
    throw ArgumentError("resource_scaling_study: symplectic samples are not supported");
  }
  HypothesisOptions opts;
  opts.threshold_c = config.threshold_c;

  const std::size_t n_sched = config.schedules.size();
  std::vector<ScalingCell> cells;
  const RngStream root{config.seed, 0};

  for (std::size_t si = 0; si < config.sizes.size(); ++si) {
    const Index dim = config.sizes[si];
    const RngStream size_stream = root.child(std::uint64_t(dim));
    // errors[trial][schedule][class]
    std::vector<std::vector<std::array<int, 2>>> errors(config.trials,
                                                        std::vector<std::array<int, 2>>(n_sched, {0, 0}));
#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < config.trials; ++t) {
      for (int cls = 0; cls < 2; ++cls) {
        const Beta beta = cls == 0 ? config.regular_ensemble : config.chaotic_ensemble;
        const RngStream sample_stream = size_stream.child(std::uint64_t(2 * t + cls));
        const auto u = sample(EnsembleSpec(beta, dim), sample_stream);
        UnitaryEigensystem<double> eig;
        if (config.shot_model == ShotModel::per_shot) {
          eig = eigensystem(u);
        } else {
          eig.phases = eigenphases(u).phases();
        }
        for (std::size_t s = 0; s < n_sched; ++s) {
          const auto shots = config.schedules[s].shots(dim);
          // Noise is keyed by the budget, so schedules that agree on it see identical shots.
          const RngStream noise = sample_stream.child(shots ? 1000 + std::uint64_t(*shots) : 999);
          const auto series =
              dqc1_form_factor_series(eig, config.delta_n, shots, config.estimator, config.shot_model, noise);
          const auto verdict = hypothesis_test(series, config.delta_n, opts);
          const bool judged_regular = verdict.decision == Verdict::regular;
          errors[t][s][cls] = (cls == 0) != judged_regular ? 1 : 0;
        }
      }
    }
    for (std::size_t s = 0; s < n_sched; ++s) {
      ScalingCell cell;
      cell.schedule = s;
      cell.dim = dim;
      cell.shots = config.schedules[s].shots(dim);
      cell.trials = config.trials;
      for (int t = 0; t < config.trials; ++t) {
        cell.errors_regular += errors[t][s][0];
        cell.errors_chaotic += errors[t][s][1];
      }
      const int total_errors = cell.errors_regular + cell.errors_chaotic;
      cell.error_rate = double(total_errors) / double(2 * config.trials);
      std::tie(cell.ci_low, cell.ci_high) = wilson_interval(total_errors, 2 * config.trials);
      cells.push_back(cell);
    }
  }
  return cells;
}

}  // namespace qchaos
