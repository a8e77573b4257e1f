#pragma once
/** \file
 * Experiment runners. Each returns a ResultTable whose metadata echoes the
 * full configuration, the master seed, a config hash and the toolkit version.
 *
 * Plotting recipes (columns to draw):
 *   ensemble    t1_sample0, t1_sample1 (dashed), t1_mean and t1_std against delta_n
 *   kickedtop   t0_dn1 and t0 against j for regime 0; t1_dn1 and t1 for regime 1
 *   walk        (x_regular, y_regular) and (x_chaotic, y_chaotic) as polylines
 *   transition  each t0_j<j> column against eps
 *   dqc1        form_factor and reference against n
 *   scaling     error_rate against dim, one curve per schedule
 */

#include "qchaos/dqc1.hpp"
#include "qchaos/ensembles.hpp"
#include "qchaos/kicked_top.hpp"
#include "qchaos/resource_scaling.hpp"
#include "qchaos/result_table.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qchaos {

struct EnsembleConvergenceConfig {
  int beta = 2;
  /// Matrix dimension; for beta = 4 the number of Kramers doublets.
  Index dim = 600;
  int samples = 50;
  int delta_n_max = 30;
  std::uint64_t seed = 0;
};

enum class Regime { regular, chaotic };

struct KickedTopScanConfig {
  std::vector<Regime> regimes{Regime::regular, Regime::chaotic};
  /// 2j values; default j = 10, 20, ..., 250.
  std::vector<int> two_j;
  int delta_n = 30;
  std::optional<std::array<double, 6>> custom_params;
  std::uint64_t seed = 0;
};

struct WalkConfig {
  int two_j = 40;
  std::uint64_t seed = 0;
};

struct TransitionConfig {
  std::vector<int> two_j{100, 200, 400};
  int eps_steps = 20;
  int delta_n = 30;
  std::uint64_t seed = 0;
};

enum class Dqc1Source { ensemble, kicked_top, identity, file };

struct Dqc1RunConfig {
  Dqc1Source source = Dqc1Source::ensemble;
  int beta = 2;
  Index dim = 256;
  Regime regime = Regime::chaotic;
  int two_j = 40;
  std::string matrix_file;
  int n_max = 30;
  std::optional<std::int64_t> shots;
  double epsilon = 1.0;
  int partitions = 1;
  ShotModel shot_model = ShotModel::per_shot;
  std::optional<FormFactorEstimator> estimator;
  std::uint64_t seed = 0;
};

struct ScalingRunConfig {
  std::vector<Index> sizes{64, 256, 1024};
  /// Equal to the proportional budget at the smallest default size.
  std::int64_t constant_shots = 4096;
  std::int64_t shots_per_dim = 64;
  int trials = 100;
  int delta_n = 6;
  double threshold_c = 2.0;
  ShotModel shot_model = ShotModel::aggregated;
  std::uint64_t seed = 0;
};

std::vector<int> default_scan_two_j();

ResultTable run_ensemble_convergence(const EnsembleConvergenceConfig& config);
ResultTable run_kicked_top_scan(const KickedTopScanConfig& config);
ResultTable run_walk(const WalkConfig& config);
ResultTable run_transition(const TransitionConfig& config);
ResultTable run_dqc1(const Dqc1RunConfig& config);
ResultTable run_resource_scaling(const ScalingRunConfig& config);

/// Operator selected by a dqc1 run configuration.
UnitaryMatrixd resolve_dqc1_source(const Dqc1RunConfig& config);

/// Seed, config echo, config hash, version and creation time.
nlohmann::ordered_json make_metadata(const std::string& experiment, std::uint64_t seed,
                                     const nlohmann::ordered_json& config);

}  // namespace qchaos
