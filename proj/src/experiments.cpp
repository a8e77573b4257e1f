#include "qchaos/experiments.hpp"

#include "qchaos/matrix_io.hpp"
#include "qchaos/spectral.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <limits>
#include <numeric>

namespace qchaos {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) out[i] = digits[v & 0xF];
  return out;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

const char* eigen_backend() {
#ifdef EIGEN_USE_LAPACKE
  return "eigen+lapacke";
#else
  return "eigen";
#endif
}

const char* regime_name(Regime r) { return r == Regime::regular ? "regular" : "chaotic"; }

TopParams<double> regime_params(Regime r, Spin j) {
  return r == Regime::regular ? regular_params(j) : chaotic_params(j);
}

std::string j_label(int two_j) {
  return two_j % 2 == 0 ? std::to_string(two_j / 2) : std::to_string(two_j / 2) + ".5";
}

nlohmann::ordered_json two_j_to_json(const std::vector<int>& two_j) {
  auto arr = nlohmann::ordered_json::array();
  for (int t : two_j) arr.push_back(t / 2.0);
  return arr;
}

struct MeanStd {
  double mean = 0;
  double std = 0;
  double var = 0;
};

// Population moments, sigma^2 = <x^2> - <x>^2.
MeanStd moments(const std::vector<double>& xs) {
  MeanStd m;
  if (xs.empty()) return m;
  double s = 0, s2 = 0;
  for (double x : xs) {
    s += x;
    s2 += x * x;
  }
  m.mean = s / double(xs.size());
  m.var = std::max(0.0, s2 / double(xs.size()) - m.mean * m.mean);
  m.std = std::sqrt(m.var);
  return m;
}

}  // namespace

nlohmann::ordered_json make_metadata(const std::string& experiment, std::uint64_t seed,
                                     const nlohmann::ordered_json& config) {
  nlohmann::ordered_json meta;
  meta["experiment"] = experiment;
  meta["master_seed"] = seed;
  meta["config"] = config;
  meta["config_hash"] = hex64(fnv1a(experiment + config.dump()));
  meta["version"] = QCHAOS_VERSION;
  meta["backend"] = eigen_backend();
  meta["created_utc"] = utc_now();
  return meta;
}

std::vector<int> default_scan_two_j() {
  std::vector<int> out;
  for (int j = 10; j <= 250; j += 10) out.push_back(2 * j);
  return out;
}

ResultTable run_ensemble_convergence(const EnsembleConvergenceConfig& config) {
  const Beta beta = beta_from_int(config.beta);
  if (config.samples < 2) throw ConfigError("ensemble: samples must be >= 2");
  if (config.delta_n_max < 1) throw ConfigError("ensemble: delta-n must be >= 1");
  const EnsembleSpec spec(beta, config.dim);
  const int dn_max = config.delta_n_max;

  // t0, t1 and the class-normalized average, per sample and window length.
  std::vector<std::vector<double>> t0(config.samples), t1(config.samples), tb(config.samples);
  std::vector<Index> stat_dim(config.samples);
#pragma omp parallel for schedule(dynamic)
  for (int s = 0; s < config.samples; ++s) {
    const auto u = sample(spec, RngStream{config.seed, std::uint64_t(s)});
    const auto spectrum = statistical_spectrum(u, beta);
    const auto series = form_factor_series(spectrum, dn_max);
    const Index n_dim = spectrum.size();
    stat_dim[s] = n_dim;
    double sum0 = 0, sum1 = 0, sumb = 0;
    bool surmise_ok = true;
    for (int n = 1; n <= dn_max; ++n) {
      const double tn = series.at(n);
      sum0 += tn / double(n_dim);
      sum1 += tn / double(n);
      surmise_ok = surmise_ok && Index(n) < n_dim;
      if (surmise_ok) sumb += tn / wigner_surmise<double>(beta, n, n_dim);
      t0[s].push_back(sum0 / n);
      t1[s].push_back(sum1 / n);
      tb[s].push_back(surmise_ok ? sumb / n : kNaN);
    }
  }

  ResultTable table({"delta_n", "t1_sample0", "t0_sample0", "t1_sample1", "t0_sample1", "t1_mean", "t1_std", "t1_var",
                     "t0_mean", "t0_std", "t0_var", "tbeta_mean", "tbeta_std", "bound"});
  for (int d = 0; d < dn_max; ++d) {
    std::vector<double> c0, c1, cb;
    for (int s = 0; s < config.samples; ++s) {
      c0.push_back(t0[s][d]);
      c1.push_back(t1[s][d]);
      cb.push_back(tb[s][d]);
    }
    const auto m0 = moments(c0);
    const auto m1 = moments(c1);
    const bool has_b = std::isfinite(cb.front());
    const auto mb = has_b ? moments(cb) : MeanStd{kNaN, kNaN, kNaN};
    const double dn = d + 1;
    table.add_row({dn, t1[0][d], t0[0][d], t1[1][d], t0[1][d], m1.mean, m1.std, m1.var, m0.mean, m0.std, m0.var,
                   mb.mean, mb.std, 1.0 / std::sqrt(dn)});
  }

  nlohmann::ordered_json cfg;
  cfg["beta"] = config.beta;
  cfg["dim"] = config.dim;
  cfg["samples"] = config.samples;
  cfg["delta_n"] = config.delta_n_max;
  cfg["statistics_dim"] = stat_dim.front();
  table.metadata = make_metadata("ensemble-convergence", config.seed, cfg);
  return table;
}

ResultTable run_kicked_top_scan(const KickedTopScanConfig& config) {
  const auto two_js = config.two_j.empty() ? default_scan_two_j() : config.two_j;
  if (config.delta_n < 1) throw ConfigError("kickedtop: delta-n must be >= 1");
  if (config.regimes.empty()) throw ConfigError("kickedtop: no regime selected");
  struct Point {
    Regime regime;
    int two_j;
  };
  std::vector<Point> points;
  for (Regime r : config.regimes)
    for (int tj : two_js) points.push_back({r, tj});

  std::vector<std::vector<double>> rows(points.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Spin j = Spin::from_twice(points[i].two_j);
    const auto params = config.custom_params ? TopParams<double>::from_vector(*config.custom_params, j)
                                             : regime_params(points[i].regime, j);
    const auto series = form_factor_series(eigenphases(floquet(params)), config.delta_n);
    rows[i] = {points[i].regime == Regime::regular ? 0.0 : 1.0,
               j.value(),
               double(j.dim()),
               t0_statistic(series, 1),
               t0_statistic(series, config.delta_n),
               t1_statistic(series, 1),
               t1_statistic(series, config.delta_n)};
  }
  ResultTable table({"regime", "j", "N", "t0_dn1", "t0", "t1_dn1", "t1"});
  for (auto& r : rows) table.add_row(std::move(r));

  nlohmann::ordered_json cfg;
  auto regimes = nlohmann::ordered_json::array();
  for (Regime r : config.regimes) regimes.push_back(regime_name(r));
  cfg["regimes"] = regimes;
  cfg["j"] = two_j_to_json(two_js);
  cfg["delta_n"] = config.delta_n;
  if (config.custom_params) cfg["params"] = *config.custom_params;
  table.metadata = make_metadata("kicked-top-scan", config.seed, cfg);
  return table;
}

ResultTable run_walk(const WalkConfig& config) {
  const Spin j = Spin::from_twice(config.two_j);
  const auto reg = eigenphase_walk(eigenphases(floquet(regular_params(j))));
  const auto cha = eigenphase_walk(eigenphases(floquet(chaotic_params(j))));
  ResultTable table({"step", "x_regular", "y_regular", "x_chaotic", "y_chaotic"});
  for (Index k = 0; k < reg.rows(); ++k) table.add_row({double(k), reg(k, 0), reg(k, 1), cha(k, 0), cha(k, 1)});
  nlohmann::ordered_json cfg;
  cfg["j"] = j.value();
  table.metadata = make_metadata("walk", config.seed, cfg);
  return table;
}

ResultTable run_transition(const TransitionConfig& config) {
  if (config.two_j.empty()) throw ConfigError("transition: j list is empty");
  if (config.eps_steps < 1) throw ConfigError("transition: eps-steps must be >= 1");
  if (config.delta_n < 1) throw ConfigError("transition: delta-n must be >= 1");
  const int n_eps = config.eps_steps + 1;
  const int n_j = int(config.two_j.size());
  std::vector<double> t0(std::size_t(n_eps) * n_j);
#pragma omp parallel for schedule(dynamic)
  for (int idx = 0; idx < n_eps * n_j; ++idx) {
    const int e = idx / n_j;
    const int c = idx % n_j;
    const double eps = double(e) / double(config.eps_steps);
    const Spin j = Spin::from_twice(config.two_j[c]);
    const auto p = interpolate_params(regular_params(j), chaotic_params(j), eps);
    t0[idx] = t0_statistic(form_factor_series(eigenphases(floquet(p)), config.delta_n), config.delta_n);
  }
  std::vector<std::string> cols{"eps"};
  for (int tj : config.two_j) cols.push_back("t0_j" + j_label(tj));
  ResultTable table(cols);
  for (int e = 0; e < n_eps; ++e) {
    std::vector<double> row{double(e) / double(config.eps_steps)};
    for (int c = 0; c < n_j; ++c) row.push_back(t0[e * n_j + c]);
    table.add_row(std::move(row));
  }
  nlohmann::ordered_json cfg;
  cfg["j"] = two_j_to_json(config.two_j);
  cfg["eps_steps"] = config.eps_steps;
  cfg["delta_n"] = config.delta_n;
  table.metadata = make_metadata("transition", config.seed, cfg);
  return table;
}

UnitaryMatrixd resolve_dqc1_source(const Dqc1RunConfig& config) {
  switch (config.source) {
    case Dqc1Source::ensemble:
      return sample(EnsembleSpec(beta_from_int(config.beta), config.dim), RngStream{config.seed, 0});
    case Dqc1Source::kicked_top:
      return floquet(regime_params(config.regime, Spin::from_twice(config.two_j)));
    case Dqc1Source::identity:
      if (config.dim < 1 || config.dim > kMaxDim) throw ConfigError("dqc1: identity dimension out of range");
      return UnitaryMatrixd::identity(config.dim);
    case Dqc1Source::file:
      return read_unitary_file(config.matrix_file);
  }
  throw ConfigError("dqc1: unknown source");
}

ResultTable run_dqc1(const Dqc1RunConfig& config) {
  if (config.n_max < 1) throw ConfigError("dqc1: n-max must be >= 1");
  const auto f = resolve_dqc1_source(config);
  const Index dim = f.dim();
  auto dq = Dqc1Config::for_dim(dim, 1, config.shots);
  dq.epsilon = config.epsilon;
  dq.partitions = config.partitions;
  dq.shot_model = config.shot_model;
  dq.validate();
  const auto estimator = config.estimator.value_or(config.shots ? FormFactorEstimator::variance_subtracted
                                                                 : FormFactorEstimator::raw);
  const auto spectrum = eigenphases(f);
  std::optional<UnitaryEigensystem<double>> eig;
  const RngStream shots_root{config.seed, 1};

  ResultTable table({"n", "re", "im", "std_error_re", "std_error_im", "corrected_re", "corrected_im", "form_factor",
                     "reference"});
  for (int n = 1; n <= config.n_max; ++n) {
    dq.power = n;
    CVectord diag;
    if (n <= 8) {
      diag = power_diagonal_mat_vec(f, n);
    } else {
      if (!eig) eig = eigensystem(f);
      diag = power_diagonal_eigen(*eig, n);
    }
    const auto est = simulate_dqc1(padded_diagonal(diag, dq.num_qubits), dq, shots_root.child(std::uint64_t(n)));
    const auto corrected = padding_correction(est, dq);
    const double reference = form_factor(spectrum, n) / (double(dim) * double(dim));
    table.add_row({double(n), est.re, est.im, est.std_error_re, est.std_error_im, corrected.re, corrected.im,
                   normalized_form_factor(corrected, estimator), reference});
  }

  nlohmann::ordered_json cfg;
  static const char* sources[] = {"ensemble", "kicked-top", "identity", "file"};
  cfg["source"] = sources[int(config.source)];
  if (config.source == Dqc1Source::ensemble) {
    cfg["beta"] = config.beta;
    cfg["dim"] = config.dim;
  }
  if (config.source == Dqc1Source::identity) cfg["dim"] = config.dim;
  if (config.source == Dqc1Source::kicked_top) {
    cfg["regime"] = regime_name(config.regime);
    cfg["j"] = config.two_j / 2.0;
  }
  if (config.source == Dqc1Source::file) cfg["matrix_file"] = config.matrix_file;
  cfg["system_dim"] = dim;
  cfg["num_qubits"] = dq.num_qubits;
  cfg["n_max"] = config.n_max;
  cfg["shots"] = config.shots ? nlohmann::ordered_json(*config.shots) : nlohmann::ordered_json("analytic");
  cfg["epsilon"] = config.epsilon;
  cfg["partitions"] = config.partitions;
  cfg["shot_model"] = config.shot_model == ShotModel::per_shot ? "per-shot" : "aggregated";
  cfg["estimator"] = estimator == FormFactorEstimator::raw ? "raw" : "variance-subtracted";
  table.metadata = make_metadata("dqc1-run", config.seed, cfg);
  return table;
}

ResultTable run_resource_scaling(const ScalingRunConfig& config) {
  ScalingStudyConfig study;
  study.sizes = config.sizes;
  study.schedules = {ShotSchedule::constant(config.constant_shots), ShotSchedule::proportional(config.shots_per_dim)};
  study.trials = config.trials;
  study.delta_n = config.delta_n;
  study.threshold_c = config.threshold_c;
  study.shot_model = config.shot_model;
  study.seed = config.seed;
  const auto cells = resource_scaling_study(study);

  ResultTable table({"schedule", "dim", "shots", "trials", "errors_regular", "errors_chaotic", "error_rate", "ci_low",
                     "ci_high"});
  for (const auto& c : cells) {
    table.add_row({double(c.schedule), double(c.dim), c.shots ? double(*c.shots) : kNaN, double(c.trials),
                   double(c.errors_regular), double(c.errors_chaotic), c.error_rate, c.ci_low, c.ci_high});
  }
  nlohmann::ordered_json cfg;
  cfg["sizes"] = config.sizes;
  cfg["schedules"] = {"constant", "proportional"};
  cfg["constant_shots"] = config.constant_shots;
  cfg["shots_per_dim"] = config.shots_per_dim;
  cfg["trials"] = config.trials;
  cfg["delta_n"] = config.delta_n;
  cfg["threshold_c"] = config.threshold_c;
  cfg["shot_model"] = config.shot_model == ShotModel::per_shot ? "per-shot" : "aggregated";
  table.metadata = make_metadata("resource-scaling", config.seed, cfg);
  return table;
}

}  // namespace qchaos
