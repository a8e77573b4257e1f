#include "doctest.h"
#include "support.hpp"

#include "qchaos/experiments.hpp"
#include "qchaos/matrix_io.hpp"
#include "qchaos/spectral.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace qchaos;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("qchaos_test_" + name);
}

}  // namespace

TEST_CASE("format_number") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(30) == "30");
  CHECK(format_number(-2.5e-300) == "-2.5e-300");
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(format_number(-HUGE_VAL) == "-inf");
  CHECK(parse_output_format("json") == OutputFormat::json);
  CHECK_THROWS_AS(parse_output_format("xml"), ConfigError);
}

TEST_CASE("result table round trips") {
  ResultTable t({"a", "b"});
  t.metadata = make_metadata("demo", 3, {{"x", 1}});
  t.add_row({1.0 / 3.0, -7e-12});
  t.add_row({std::nan(""), 2.0});
  CHECK_THROWS_AS(t.add_row({1.0}), ArgumentError);
  CHECK(t.column("b") == std::vector<double>{-7e-12, 2.0});
  CHECK_THROWS_AS(t.column_index("c"), ArgumentError);

  const auto csv = to_csv(t);
  CHECK(csv.rfind("# experiment: demo\n", 0) == 0);
  CHECK(csv.find("# master_seed: 3\n") != std::string::npos);
  const auto from_csv = table_from_csv(csv);
  const auto from_json = table_from_json(to_json(t));
  CHECK(from_json.metadata.at("config_hash") == t.metadata.at("config_hash"));
  for (const auto& back : {from_csv, from_json}) {
    CHECK(back.columns == t.columns);
    REQUIRE(back.rows.size() == 2);
    CHECK(back.rows[0] == t.rows[0]);
    CHECK(std::isnan(back.rows[1][0]));
    CHECK(back.rows[1][1] == 2.0);
  }
  CHECK_THROWS_AS(table_from_csv("a\nfoo\n"), IoError);
  CHECK_THROWS_AS(table_from_json("{"), IoError);
}

TEST_CASE("metadata") {
  const auto m = make_metadata("walk", 9, {{"j", 20.0}});
  for (const char* key : {"experiment", "master_seed", "config", "config_hash", "version", "created_utc"}) {
    CHECK(m.contains(key));
  }
  CHECK(m["version"] == QCHAOS_VERSION);
  CHECK(make_metadata("walk", 9, {{"j", 20.0}})["config_hash"] == m["config_hash"]);
  CHECK(make_metadata("walk", 9, {{"j", 21.0}})["config_hash"] != m["config_hash"]);
}

TEST_CASE("matrix files") {
  const auto u = testing::cue(5, 3);
  const auto path = temp_file("matrix.json");
  write_matrix_file(u.matrix(), path);
  CHECK(read_unitary_file(path).matrix() == u.matrix());

  CHECK(matrix_from_json(R"({"dim":1,"entries":[[0,1]]})")(0, 0) == Complex<double>(0, 1));
  CHECK_THROWS_AS(matrix_from_json(R"({"dim":2,"entries":[[1,0]]})"), IoError);
  CHECK_THROWS_AS(matrix_from_json(R"({"dim":1,"entries":[[1,0]],"note":1})"), IoError);
  CHECK_THROWS_AS(matrix_from_json(R"({"dim":1,"entries":[["a",0]]})"), IoError);
  CHECK_THROWS_AS(matrix_from_json(R"({"dim":5000,"entries":[]})"), DimensionError);
  CHECK_THROWS_AS(matrix_from_json("[1,2]"), IoError);

  std::ofstream(path) << R"({"dim":2,"entries":[[1,0],[1,0],[0,0],[1,0]]})";
  CHECK_THROWS_AS(read_unitary_file(path), UnitarityError);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_unitary_file(path), IoError);
}

TEST_CASE("ensemble convergence table") {
  EnsembleConvergenceConfig cfg;
  cfg.dim = 4;
  cfg.samples = 2;
  const auto t = run_ensemble_convergence(cfg);
  CHECK(t.columns.size() == 14);
  CHECK(t.rows.size() == 30);
  CHECK(t.rows[0][t.column_index("delta_n")] == 1);
  // the surmise is only defined for n < N
  CHECK(std::isfinite(t.rows[2][t.column_index("tbeta_mean")]));
  CHECK(std::isnan(t.rows[3][t.column_index("tbeta_mean")]));
  CHECK(t.rows[29][t.column_index("bound")] == doctest::Approx(1 / std::sqrt(30.0)));

  cfg.samples = 1;
  CHECK_THROWS_AS(run_ensemble_convergence(cfg), ConfigError);
  cfg.samples = 2;
  cfg.beta = 3;
  CHECK_THROWS_AS(run_ensemble_convergence(cfg), ArgumentError);

  SUBCASE("symplectic runs use doublet counts") {
    EnsembleConvergenceConfig s;
    s.beta = 4;
    s.dim = 20;
    s.samples = 2;
    s.delta_n_max = 5;
    const auto ts = run_ensemble_convergence(s);
    CHECK(ts.metadata["config"]["statistics_dim"] == 20);
  }
}

TEST_CASE("poisson convergence of t0") {
  EnsembleConvergenceConfig cfg;
  cfg.beta = 0;
  cfg.seed = 11;
  const auto t = run_ensemble_convergence(cfg);
  const double m = t.rows[29][t.column_index("t0_mean")];
  CHECK(std::abs(m - 1) <= 3 / std::sqrt(30.0) / std::sqrt(50.0));
}

TEST_CASE("kicked top scan") {
  KickedTopScanConfig cfg;
  cfg.two_j = {20, 40};
  const auto t = run_kicked_top_scan(cfg);
  CHECK(t.rows.size() == 4);
  CHECK(t.columns == std::vector<std::string>{"regime", "j", "N", "t0_dn1", "t0", "t1_dn1", "t1"});
  CHECK(t.rows[3][t.column_index("regime")] == 1);
  CHECK(t.rows[3][t.column_index("j")] == 20);
  CHECK(t.rows[3][t.column_index("N")] == 41);
  const auto direct = form_factor_series(eigenphases(floquet(chaotic_params(Spin::from_twice(40)))), 30);
  CHECK(t.rows[3][t.column_index("t1")] == t1_statistic(direct, 30));
  CHECK(t.rows[3][t.column_index("t0_dn1")] == direct.at(1) / 41);

  CHECK(default_scan_two_j().size() == 25);
  CHECK(default_scan_two_j().back() == 500);
}

TEST_CASE("walk") {
  const auto t = run_walk({});
  CHECK(t.rows.size() == 42);
  const auto& end = t.rows.back();
  const auto reg = eigenphases(floquet(regular_params(Spin::from_twice(40))));
  const auto cha = eigenphases(floquet(chaotic_params(Spin::from_twice(40))));
  const double reg2 = end[1] * end[1] + end[2] * end[2];
  const double cha2 = end[3] * end[3] + end[4] * end[4];
  CHECK(std::abs(reg2 - form_factor(reg, 1)) <= 1e-8);
  CHECK(std::abs(cha2 - form_factor(cha, 1)) <= 1e-8);
  CHECK(reg2 > cha2);
}

TEST_CASE("transition") {
  TransitionConfig cfg;
  cfg.two_j = {40};
  cfg.eps_steps = 4;
  const auto t = run_transition(cfg);
  CHECK(t.columns == std::vector<std::string>{"eps", "t0_j20"});
  CHECK(t.rows.size() == 5);
  CHECK(t.rows[2][0] == 0.5);
  cfg.two_j = {3};
  CHECK(run_transition(cfg).columns[1] == "t0_j1.5");
  cfg.eps_steps = 0;
  CHECK_THROWS_AS(run_transition(cfg), ConfigError);
}

TEST_CASE("dqc1 runs") {
  SUBCASE("identity source") {
    Dqc1RunConfig cfg;
    cfg.source = Dqc1Source::identity;
    cfg.dim = 6;
    cfg.n_max = 3;
    const auto t = run_dqc1(cfg);
    for (const auto& r : t.rows) CHECK(r[t.column_index("form_factor")] == doctest::Approx(1.0).epsilon(1e-14));
  }

  SUBCASE("kicked top analytic matches the spectral form factors") {
    Dqc1RunConfig cfg;
    cfg.source = Dqc1Source::kicked_top;
    cfg.two_j = 40;
    const auto t = run_dqc1(cfg);
    REQUIRE(t.rows.size() == 30);
    const auto series = form_factor_series(eigenphases(floquet(chaotic_params(Spin::from_twice(40)))), 30);
    for (int n = 1; n <= 30; ++n) {
      CHECK(std::abs(t.rows[n - 1][t.column_index("form_factor")] * 41 * 41 - series.at(n)) <= 1e-8 * 41 * 41);
    }
  }

  SUBCASE("file source and errors") {
    const auto path = temp_file("dqc1.json");
    write_matrix_file(testing::cue(3, 2).matrix(), path);
    Dqc1RunConfig cfg;
    cfg.source = Dqc1Source::file;
    cfg.matrix_file = path.string();
    cfg.n_max = 2;
    cfg.shots = 1000;
    const auto t = run_dqc1(cfg);
    CHECK(t.metadata["config"]["num_qubits"] == 2);
    CHECK(t.rows.size() == 2);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(run_dqc1(cfg), IoError);
  }
}

TEST_CASE("reproducible data rows") {
  Dqc1RunConfig d;
  d.dim = 32;
  d.n_max = 10;
  d.shots = 2000;
  d.partitions = 3;
  d.seed = 77;
  CHECK(csv_data(run_dqc1(d)) == csv_data(run_dqc1(d)));
  auto other = d;
  other.seed = 78;
  CHECK(csv_data(run_dqc1(d)) != csv_data(run_dqc1(other)));

  EnsembleConvergenceConfig e;
  e.dim = 40;
  e.samples = 4;
  e.seed = 5;
  CHECK(csv_data(run_ensemble_convergence(e)) == csv_data(run_ensemble_convergence(e)));

  ScalingRunConfig s;
  s.sizes = {16};
  s.trials = 3;
  s.delta_n = 1;
  s.seed = 2;
  CHECK(csv_data(run_resource_scaling(s)) == csv_data(run_resource_scaling(s)));
}
