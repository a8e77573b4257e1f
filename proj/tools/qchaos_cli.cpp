// qchaos: experiment runner for form-factor chaos diagnostics and one-clean-qubit trace estimation.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure, 4 I/O error.

#include "qchaos/experiments.hpp"
#include "qchaos/matrix_io.hpp"
#include "qchaos/spectral.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace qchaos;

enum ExitCode { kOk = 0, kConfigError = 2, kNumericalError = 3, kIoError = 4 };

struct CommonOptions {
  std::uint64_t seed = 0;
  std::string out = "-";
  std::string format = "csv";
  std::string config;
};

void add_common(CLI::App* sub, CommonOptions& common) {
  sub->add_option("--seed", common.seed, "Master seed")->capture_default_str();
  sub->add_option("--out", common.out, "Output path ('-' for stdout)")->capture_default_str();
  sub->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  sub->add_option("--config", common.config, "JSON file of option values; command-line flags take precedence");
}

std::string json_scalar_to_string(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return format_number(v.get<double>());
  throw ConfigError("config value " + v.dump() + " is not a scalar");
}

// Each key names a long option of the subcommand (with or without leading dashes).
void apply_json_config(CLI::App* sub, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file '" + path + "': " + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config file must hold a JSON object");
  for (const auto& [raw_key, value] : doc.items()) {
    std::string key = raw_key;
    while (!key.empty() && key.front() == '-') key.erase(key.begin());
    if (key == "config") throw ConfigError("config files cannot nest --config");
    CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (opt == nullptr) throw ConfigError("unknown config key '" + raw_key + "' for '" + sub->get_name() + "'");
    if (opt->count() > 0) continue;
    std::vector<std::string> inputs;
    if (value.is_array()) {
      for (const auto& v : value) inputs.push_back(json_scalar_to_string(v));
    } else {
      inputs.push_back(json_scalar_to_string(value));
    }
    try {
      for (const auto& s : inputs) opt->add_result(s);
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw ConfigError("config key '" + raw_key + "': " + e.what());
    }
  }
}

std::vector<int> to_two_j(const std::vector<double>& js) {
  std::vector<int> out;
  for (double j : js) out.push_back(Spin::from_value(j).twice());
  return out;
}

std::optional<std::int64_t> parse_shots(const std::string& s) {
  if (s == "analytic") return std::nullopt;
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size() || v < 1) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("--shots must be a positive integer or 'analytic', got '" + s + "'");
  }
}

Regime parse_regime(const std::string& s) { return s == "regular" ? Regime::regular : Regime::chaotic; }

ShotModel parse_shot_model(const std::string& s) {
  return s == "per-shot" ? ShotModel::per_shot : ShotModel::aggregated;
}

std::array<double, 6> to_params(const std::vector<double>& p) {
  if (p.size() != 6) throw ConfigError("--params needs six values (ax, ay, az, tx, ty, tz)");
  return {p[0], p[1], p[2], p[3], p[4], p[5]};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral form factors, the regular/chaotic hypothesis test and DQC1 trace estimation"};
  app.set_version_flag("--version", QCHAOS_VERSION);
  app.require_subcommand(1);

  CommonOptions common;
  std::map<CLI::App*, std::function<ResultTable()>> runners;

  // ensemble
  EnsembleConvergenceConfig ens;
  auto* ens_cmd = app.add_subcommand("ensemble", "t0/t1 convergence over random-matrix samples");
  add_common(ens_cmd, common);
  ens_cmd->add_option("--beta", ens.beta, "Symmetry class")->check(CLI::IsMember({0, 1, 2, 4}))->capture_default_str();
  ens_cmd->add_option("--dim", ens.dim, "Matrix dimension (Kramers doublets for beta=4)")->capture_default_str();
  ens_cmd->add_option("--samples", ens.samples, "Number of samples")->capture_default_str();
  ens_cmd->add_option("--delta-n", ens.delta_n_max, "Largest averaging window")->capture_default_str();
  runners[ens_cmd] = [&] {
    ens.seed = common.seed;
    return run_ensemble_convergence(ens);
  };

  // kickedtop
  KickedTopScanConfig scan;
  std::vector<double> scan_j;
  std::string scan_regime = "both";
  std::vector<double> scan_params;
  auto* kt_cmd = app.add_subcommand("kickedtop", "t0/t1 of the kicked top over a grid of j");
  add_common(kt_cmd, common);
  kt_cmd->add_option("--j", scan_j, "Angular momenta (default 10,20,...,250)")->delimiter(',');
  kt_cmd->add_option("--delta-n", scan.delta_n, "Averaging window")->capture_default_str();
  kt_cmd->add_option("--regime", scan_regime, "Parameter set")
      ->check(CLI::IsMember({"regular", "chaotic", "both"}))
      ->capture_default_str();
  kt_cmd->add_option("--params", scan_params, "Custom ax,ay,az,tx,ty,tz (overrides --regime)")->delimiter(',');
  runners[kt_cmd] = [&] {
    scan.seed = common.seed;
    scan.two_j = to_two_j(scan_j);
    if (!scan_params.empty()) {
      scan.custom_params = to_params(scan_params);
      scan.regimes = {Regime::regular};
    } else if (scan_regime != "both") {
      scan.regimes = {parse_regime(scan_regime)};
    }
    return run_kicked_top_scan(scan);
  };

  // walk
  double walk_j = 20;
  auto* walk_cmd = app.add_subcommand("walk", "Eigenphase random walks, regular and chaotic");
  add_common(walk_cmd, common);
  walk_cmd->add_option("--j", walk_j, "Angular momentum")->capture_default_str();
  runners[walk_cmd] = [&] {
    WalkConfig w;
    w.two_j = Spin::from_value(walk_j).twice();
    w.seed = common.seed;
    return run_walk(w);
  };

  // transition
  TransitionConfig tr;
  std::vector<double> tr_j{50, 100, 200};
  auto* tr_cmd = app.add_subcommand("transition", "t0 along the regular-to-chaotic interpolation");
  add_common(tr_cmd, common);
  tr_cmd->add_option("--j", tr_j, "Angular momenta")->delimiter(',')->capture_default_str();
  tr_cmd->add_option("--eps-steps", tr.eps_steps, "Grid intervals on [0, 1]")->capture_default_str();
  tr_cmd->add_option("--delta-n", tr.delta_n, "Averaging window")->capture_default_str();
  runners[tr_cmd] = [&] {
    tr.seed = common.seed;
    tr.two_j = to_two_j(tr_j);
    return run_transition(tr);
  };

  // dqc1
  Dqc1RunConfig dq;
  std::string dq_source = "ensemble";
  std::string dq_regime = "chaotic";
  double dq_j = 20;
  std::string dq_shots = "analytic";
  std::string dq_model = "per-shot";
  std::string dq_estimator = "auto";
  auto* dq_cmd = app.add_subcommand("dqc1", "Simulated one-clean-qubit estimates of Tr F^n");
  add_common(dq_cmd, common);
  dq_cmd->add_option("--source", dq_source, "Operator source")
      ->check(CLI::IsMember({"ensemble", "kicked-top", "identity", "file"}))
      ->capture_default_str();
  dq_cmd->add_option("--beta", dq.beta, "Ensemble class")->check(CLI::IsMember({0, 1, 2, 4}))->capture_default_str();
  dq_cmd->add_option("--dim", dq.dim, "Ensemble or identity dimension")->capture_default_str();
  dq_cmd->add_option("--regime", dq_regime, "Kicked-top parameter set")
      ->check(CLI::IsMember({"regular", "chaotic"}))
      ->capture_default_str();
  dq_cmd->add_option("--j", dq_j, "Kicked-top angular momentum")->capture_default_str();
  dq_cmd->add_option("--matrix", dq.matrix_file, "Matrix file for --source file");
  dq_cmd->add_option("--n-max", dq.n_max, "Largest power n")->capture_default_str();
  dq_cmd->add_option("--shots", dq_shots, "Shot budget per power, or 'analytic'")->capture_default_str();
  dq_cmd->add_option("--epsilon", dq.epsilon, "Pseudo-purity of the clean qubit")->capture_default_str();
  dq_cmd->add_option("--partitions", dq.partitions, "Independent shot partitions")->capture_default_str();
  dq_cmd->add_option("--shot-model", dq_model, "Shot sampling")
      ->check(CLI::IsMember({"per-shot", "aggregated"}))
      ->capture_default_str();
  dq_cmd->add_option("--estimator", dq_estimator, "Form-factor estimator")
      ->check(CLI::IsMember({"auto", "raw", "variance-subtracted"}))
      ->capture_default_str();
  runners[dq_cmd] = [&] {
    dq.seed = common.seed;
    dq.source = dq_source == "ensemble"     ? Dqc1Source::ensemble
                : dq_source == "kicked-top" ? Dqc1Source::kicked_top
                : dq_source == "identity"   ? Dqc1Source::identity
                                            : Dqc1Source::file;
    if (dq.source == Dqc1Source::file && dq.matrix_file.empty()) throw ConfigError("--source file needs --matrix");
    dq.regime = parse_regime(dq_regime);
    dq.two_j = Spin::from_value(dq_j).twice();
    dq.shots = parse_shots(dq_shots);
    dq.shot_model = parse_shot_model(dq_model);
    if (dq_estimator == "raw") dq.estimator = FormFactorEstimator::raw;
    if (dq_estimator == "variance-subtracted") dq.estimator = FormFactorEstimator::variance_subtracted;
    return run_dqc1(dq);
  };

  // scaling
  ScalingRunConfig sc;
  std::vector<long long> sc_sizes{64, 256, 1024};
  std::string sc_model = "aggregated";
  auto* sc_cmd = app.add_subcommand("scaling", "Discrimination error against N for constant and O(N) shot budgets");
  add_common(sc_cmd, common);
  sc_cmd->add_option("--sizes", sc_sizes, "System dimensions (powers of two)")->delimiter(',')->capture_default_str();
  sc_cmd->add_option("--shots", sc.constant_shots, "Constant shot budget")->capture_default_str();
  sc_cmd->add_option("--shots-per-dim", sc.shots_per_dim, "Shots per unit of N for the O(N) schedule")
      ->capture_default_str();
  sc_cmd->add_option("--trials", sc.trials, "Samples per ensemble and size")->capture_default_str();
  sc_cmd->add_option("--delta-n", sc.delta_n, "Averaging window")->capture_default_str();
  sc_cmd->add_option("--threshold-c", sc.threshold_c, "Acceptance band c / sqrt(delta_n)")->capture_default_str();
  sc_cmd->add_option("--shot-model", sc_model, "Shot sampling")
      ->check(CLI::IsMember({"per-shot", "aggregated"}))
      ->capture_default_str();
  runners[sc_cmd] = [&] {
    sc.seed = common.seed;
    sc.sizes.assign(sc_sizes.begin(), sc_sizes.end());
    sc.shot_model = parse_shot_model(sc_model);
    return run_resource_scaling(sc);
  };

  // sample: write one ensemble draw to a matrix file
  int smp_beta = 2;
  long long smp_dim = 8;
  std::uint64_t smp_index = 0;
  auto* smp_cmd = app.add_subcommand("sample", "Write one ensemble sample as a matrix file");
  add_common(smp_cmd, common);
  smp_cmd->add_option("--beta", smp_beta, "Symmetry class")->check(CLI::IsMember({0, 1, 2, 4}))->capture_default_str();
  smp_cmd->add_option("--dim", smp_dim, "Dimension (Kramers doublets for beta=4)")->capture_default_str();
  smp_cmd->add_option("--index", smp_index, "Stream index under the seed")->capture_default_str();

  // floquet: write a kicked-top operator to a matrix file
  double fl_j = 20;
  std::string fl_regime = "chaotic";
  std::vector<double> fl_params;
  auto* fl_cmd = app.add_subcommand("floquet", "Write a kicked-top Floquet operator as a matrix file");
  add_common(fl_cmd, common);
  fl_cmd->add_option("--j", fl_j, "Angular momentum")->capture_default_str();
  fl_cmd->add_option("--regime", fl_regime, "Parameter set")
      ->check(CLI::IsMember({"regular", "chaotic"}))
      ->capture_default_str();
  fl_cmd->add_option("--params", fl_params, "Custom ax,ay,az,tx,ty,tz")->delimiter(',');

  // analyze: hypothesis test on a matrix file
  std::string an_matrix;
  int an_beta = 2;
  int an_delta_n = 30;
  double an_c = 3.0;
  double an_fraction = 0.1;
  auto* an_cmd = app.add_subcommand("analyze", "Form factors and the regular/chaotic verdict for a matrix file");
  add_common(an_cmd, common);
  an_cmd->add_option("--matrix", an_matrix, "Matrix file")->required();
  an_cmd->add_option("--beta", an_beta, "Class used for Kramers reduction (4) and the surmise column")
      ->check(CLI::IsMember({0, 1, 2, 4}))
      ->capture_default_str();
  an_cmd->add_option("--delta-n", an_delta_n, "Averaging window")->capture_default_str();
  an_cmd->add_option("--threshold-c", an_c, "Acceptance band c / sqrt(delta_n)")->capture_default_str();
  an_cmd->add_option("--max-window-fraction", an_fraction, "Largest delta_n / N")->capture_default_str();
  runners[an_cmd] = [&] {
    const auto u = read_unitary_file(an_matrix);
    const Beta beta = beta_from_int(an_beta);
    const auto spectrum = statistical_spectrum(u, beta);
    const auto series = form_factor_series(spectrum, an_delta_n);
    HypothesisOptions opts;
    opts.threshold_c = an_c;
    opts.max_window_fraction = an_fraction;
    const auto v = hypothesis_test(series, an_delta_n, opts);
    ResultTable t({"N", "delta_n", "t0", "t1", "decision", "k_estimate"});
    t.add_row({double(spectrum.size()), double(an_delta_n), v.t0, v.t1, double(int(v.decision)),
               v.k_estimate ? double(*v.k_estimate) : std::numeric_limits<double>::quiet_NaN()});
    nlohmann::ordered_json cfg;
    cfg["matrix"] = an_matrix;
    cfg["beta"] = an_beta;
    cfg["delta_n"] = an_delta_n;
    cfg["threshold_c"] = an_c;
    cfg["max_window_fraction"] = an_fraction;
    cfg["decision_codes"] = "0 regular, 1 chaotic, 2 inconclusive";
    t.metadata = make_metadata("analyze", common.seed, cfg);
    return t;
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    if (code == 0) return kOk;
    return dynamic_cast<const CLI::FileError*>(&e) != nullptr ? kIoError : kConfigError;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    if (!common.config.empty()) apply_json_config(sub, common.config);
    const OutputFormat format = parse_output_format(common.format);

    if (sub == smp_cmd) {
      const auto u = sample(EnsembleSpec(beta_from_int(smp_beta), smp_dim), RngStream{common.seed, smp_index});
      if (common.out == "-") {
        std::cout << matrix_to_json(u.matrix());
      } else {
        write_matrix_file(u.matrix(), common.out);
      }
      return kOk;
    }
    if (sub == fl_cmd) {
      const Spin j = Spin::from_value(fl_j);
      const auto p = !fl_params.empty()       ? TopParams<double>::from_vector(to_params(fl_params), j)
                     : fl_regime == "regular" ? regular_params(j)
                                              : chaotic_params(j);
      const auto f = floquet(p);
      if (common.out == "-") {
        std::cout << matrix_to_json(f.matrix());
      } else {
        write_matrix_file(f.matrix(), common.out);
      }
      return kOk;
    }
    const ResultTable table = runners.at(sub)();
    write_table(table, common.out, format);
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalError;
  } catch (const std::invalid_argument& e) {
    // ConfigError, ArgumentError and DimensionError.
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const UnitarityError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericalError;
  }
  return kOk;
}
