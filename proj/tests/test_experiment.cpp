#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gramsample/bounds.hpp"
#include "gramsample/experiment.hpp"
#include "gramsample/matcore.hpp"
#include "gramsample/synth.hpp"

using namespace gramsample;

namespace {

const char* kFullConfig = R"({
  "matrix": {"synthetic": {"rows": 4, "cols": 12, "spectrum": [2.0, 1.0], "seed": 7}},
  "c_grid": [2, 4, 8],
  "trials": 30,
  "seed": 99,
  "delta": 0.05,
  "beta": 0.5,
  "epsilon": 0.75,
  "threads": 2,
  "strategies": ["optimal", "leverage", "uniform", "nearly-optimal"],
  "output": {"path": "out.csv", "format": "json"}
})";

ExperimentConfig synthetic_config() {
  ExperimentConfig cfg;
  cfg.use_synthetic = true;
  cfg.synthetic.rows = 6;
  cfg.synthetic.cols = 30;
  cfg.synthetic.spectrum = {1.0, 0.7, 0.4, 0.25, 0.15, 0.1};
  cfg.synthetic.seed = 3;
  cfg.c_grid = {4, 16};
  cfg.trials = 10;
  cfg.seed = 42;
  cfg.strategies = {ProbKind::Optimal, ProbKind::Uniform};
  return cfg;
}

}  // namespace

TEST_CASE("full config parses every field") {
  const ExperimentConfig cfg = parse_experiment_config(kFullConfig);
  CHECK(cfg.use_synthetic);
  CHECK(cfg.synthetic.rows == 4);
  CHECK(cfg.synthetic.cols == 12);
  CHECK(cfg.synthetic.spectrum == std::vector<double>{2.0, 1.0});
  CHECK(cfg.synthetic.seed == 7);
  CHECK(cfg.c_grid == std::vector<Index>{2, 4, 8});
  CHECK(cfg.trials == 30);
  CHECK(cfg.seed == 99);
  CHECK(cfg.delta == 0.05);
  CHECK(cfg.beta == 0.5);
  CHECK(cfg.epsilon == 0.75);
  CHECK(cfg.threads == 2);
  REQUIRE(cfg.strategies.size() == 4);
  CHECK(cfg.strategies[0] == ProbKind::Optimal);
  CHECK(cfg.strategies[1] == ProbKind::Leverage);
  CHECK(cfg.strategies[2] == ProbKind::Uniform);
  CHECK(cfg.strategies[3] == ProbKind::NearlyOptimal);
  CHECK(cfg.output_path == "out.csv");
  CHECK(cfg.format == OutputFormat::Json);  // explicit format wins over extension
}

TEST_CASE("config defaults") {
  const ExperimentConfig cfg = parse_experiment_config(
      R"({"matrix": "a.csv", "c_grid": [3], "strategies": ["uniform"]})");
  CHECK_FALSE(cfg.use_synthetic);
  CHECK(cfg.matrix_file == "a.csv");
  CHECK(cfg.trials == 100);
  CHECK(cfg.seed == 0);
  CHECK(cfg.delta == 0.01);
  CHECK(cfg.beta == 1.0);
  CHECK(std::isnan(cfg.epsilon));
  CHECK(cfg.threads == 0);
  CHECK(cfg.output_path.empty());
  CHECK(cfg.format == OutputFormat::Csv);
}

TEST_CASE("matrix and output spellings") {
  CHECK(parse_experiment_config(
            R"({"matrix": {"file": "m.mtx"}, "c_grid": [1], "strategies": ["optimal"]})")
            .matrix_file == "m.mtx");
  const ExperimentConfig by_ext = parse_experiment_config(
      R"({"matrix": "a.csv", "c_grid": [1], "strategies": ["optimal"], "output": "r.json"})");
  CHECK(by_ext.output_path == "r.json");
  CHECK(by_ext.format == OutputFormat::Json);
  const ExperimentConfig csv_ext = parse_experiment_config(
      R"({"matrix": "a.csv", "c_grid": [1], "strategies": ["optimal"],
          "output": {"path": "r.txt"}})");
  CHECK(csv_ext.format == OutputFormat::Csv);
}

TEST_CASE("config validation failures") {
  auto bad = [](const std::string& text) {
    CHECK_THROWS_AS(parse_experiment_config(text), InvalidArgumentError);
  };
  bad("not json at all");
  bad(R"({"c_grid": [1], "strategies": ["optimal"]})");
  bad(R"({"matrix": "a.csv", "strategies": ["optimal"]})");
  bad(R"({"matrix": "a.csv", "c_grid": [], "strategies": ["optimal"]})");
  bad(R"({"matrix": "a.csv", "c_grid": [0], "strategies": ["optimal"]})");
  bad(R"({"matrix": "a.csv", "c_grid": [1]})");
  bad(R"({"matrix": "a.csv", "c_grid": [1], "strategies": []})");
  bad(R"({"matrix": "a.csv", "c_grid": [1], "strategies": ["magic"]})");
  bad(R"({"matrix": "a.csv", "c_grid": [1], "strategies": ["optimal"], "trials": 0})");
  bad(R"({"matrix": "a.csv", "c_grid": [1], "strategies": ["optimal"], "delta": 1.0})");
  bad(R"({"matrix": "a.csv", "c_grid": [1], "strategies": ["optimal"], "beta": 0.0})");
  bad(R"({"matrix": "a.csv", "c_grid": [1], "strategies": ["optimal"], "epsilon": -0.5})");
  bad(R"({"matrix": "a.csv", "c_grid": [1], "strategies": ["optimal"], "threads": -1})");
  bad(R"({"matrix": {"wrong": 1}, "c_grid": [1], "strategies": ["optimal"]})");
  bad(R"({"matrix": "a.csv", "c_grid": [1], "strategies": ["optimal"],
          "output": {"path": "x", "format": "xml"}})");
}

TEST_CASE("rank-one matrices are reproduced exactly at every sample size") {
  ExperimentConfig cfg;
  cfg.use_synthetic = true;
  cfg.synthetic.rows = 6;
  cfg.synthetic.cols = 30;
  cfg.synthetic.spectrum = {2.5};
  cfg.synthetic.seed = 11;
  cfg.c_grid = {1, 3, 8};
  cfg.trials = 25;
  cfg.seed = 5;
  cfg.strategies = {ProbKind::Optimal};
  for (const TrialStats& row : run_error_experiment(cfg)) {
    CHECK(row.max_error <= 1e-12);
  }
}

TEST_CASE("runs are deterministic and thread-count independent") {
  ExperimentConfig cfg = synthetic_config();
  const Matrix<double> a = resolve_matrix(cfg);

  cfg.threads = 1;
  const std::vector<TrialStats> serial = run_error_experiment(cfg, a);
  cfg.threads = 4;
  const std::vector<TrialStats> parallel = run_error_experiment(cfg, a);
  const std::vector<TrialStats> again = run_error_experiment(cfg, a);

  REQUIRE(serial.size() == cfg.strategies.size() * cfg.c_grid.size());
  REQUIRE(parallel.size() == serial.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].strategy == parallel[i].strategy);
    CHECK(serial[i].c == parallel[i].c);
    CHECK(serial[i].min_error == parallel[i].min_error);
    CHECK(serial[i].mean_error == parallel[i].mean_error);
    CHECK(serial[i].max_error == parallel[i].max_error);
    CHECK(again[i].mean_error == parallel[i].mean_error);
  }
}

TEST_CASE("rows come out strategy-major in grid order") {
  ExperimentConfig cfg = synthetic_config();
  const std::vector<TrialStats> stats = run_error_experiment(cfg);
  REQUIRE(stats.size() == 4);
  CHECK(stats[0].strategy == "optimal");
  CHECK(stats[0].c == 4);
  CHECK(stats[1].strategy == "optimal");
  CHECK(stats[1].c == 16);
  CHECK(stats[2].strategy == "uniform");
  CHECK(stats[2].c == 4);
  CHECK(stats[3].strategy == "uniform");
  CHECK(stats[3].c == 16);
  for (const TrialStats& row : stats) {
    CHECK(row.trials == cfg.trials);
    CHECK(row.min_error <= row.mean_error);
    CHECK(row.mean_error <= row.max_error);
    CHECK(std::isnan(row.success_rate));
  }
}

TEST_CASE("success rate counts trials under the configured threshold") {
  ExperimentConfig cfg = synthetic_config();
  cfg.epsilon = 100.0;
  for (const TrialStats& row : run_error_experiment(cfg)) CHECK(row.success_rate == 1.0);
  cfg.epsilon = 1e-15;
  for (const TrialStats& row : run_error_experiment(cfg)) CHECK(row.success_rate == 0.0);
}

TEST_CASE("mean error decreases along a widening sample grid") {
  ExperimentConfig cfg;
  cfg.use_synthetic = true;
  cfg.synthetic.rows = 8;
  cfg.synthetic.cols = 40;
  cfg.synthetic.spectrum = {1.0, 0.8, 0.6, 0.45, 0.3, 0.2, 0.12, 0.08};
  cfg.synthetic.seed = 17;
  cfg.c_grid = {2, 8, 32, 128};
  cfg.trials = 60;
  cfg.seed = 1;
  cfg.strategies = {ProbKind::Optimal};
  const std::vector<TrialStats> stats = run_error_experiment(cfg);
  REQUIRE(stats.size() == 4);
  for (std::size_t i = 1; i < stats.size(); ++i) {
    CHECK(stats[i].mean_error < stats[i - 1].mean_error);
  }
  CHECK(stats.back().mean_error < 0.5 * stats.front().mean_error);
}

TEST_CASE("overlay bounds use the strategy's effective beta") {
  ExperimentConfig cfg = synthetic_config();
  cfg.beta = 0.5;
  cfg.strategies = {ProbKind::NearlyOptimal, ProbKind::Uniform};
  const Matrix<double> a = resolve_matrix(cfg);
  const SpectralSummary<double> summary = spectral_summary(a);
  const std::vector<TrialStats> stats = run_error_experiment(cfg, a);

  BoundQuery q;
  q.delta = cfg.delta;
  q.stable_rank = summary.stable_rank;
  q.rank = summary.rank;

  q.beta = 0.5;
  CHECK(stats[0].bound_thm41 == gram_error_bound(q, stats[0].c, GramBound::Thm41));
  CHECK(stats[0].bound_thm42 == gram_error_bound(q, stats[0].c, GramBound::Thm42));
  q.beta = 1.0;
  CHECK(stats[2].bound_thm41 == gram_error_bound(q, stats[2].c, GramBound::Thm41));
  CHECK(stats[2].bound_thm42 == gram_error_bound(q, stats[2].c, GramBound::Thm42));
  CHECK(stats[0].bound_thm41 > stats[2].bound_thm41);
}

TEST_CASE("probability ratio report") {
  RandomStream stream(21);
  const Matrix<double> q = random_orthonormal<double>(12, 4, stream);
  const Matrix<double> row_orth = q.transpose();
  for (double r : probability_ratio_report(row_orth)) {
    CHECK(r == doctest::Approx(1.0).epsilon(1e-10));
  }

  Matrix<double> diag = Matrix<double>::Zero(2, 2);
  diag(0, 0) = 3.0;
  diag(1, 1) = 1.0;
  const std::vector<double> ratios = probability_ratio_report(diag);
  REQUIRE(ratios.size() == 2);
  CHECK(ratios[0] == doctest::Approx(5.0 / 9.0).epsilon(1e-12));
  CHECK(ratios[1] == doctest::Approx(5.0).epsilon(1e-12));

  Matrix<double> with_zero(2, 3);
  with_zero << 1, 0, 2, 0, 0, 1;
  CHECK(probability_ratio_report(with_zero).size() == 2);
}

TEST_CASE("csv emission round-trips at full precision") {
  TrialStats row;
  row.strategy = "optimal";
  row.c = 7;
  row.trials = 3;
  row.min_error = 1.0 / 3.0;
  row.mean_error = M_PI / 10.0;
  row.max_error = 0.9999999999999999;
  row.bound_thm41 = 1.23456789012345678e-3;
  row.bound_thm42 = 2.0;

  std::ostringstream out;
  emit_results({row}, OutputFormat::Csv, out);
  std::istringstream in(out.str());
  std::string header;
  std::string line;
  REQUIRE(std::getline(in, header));
  CHECK(header == "strategy,c,trials,min_error,mean_error,max_error,bound_thm41,bound_thm42");
  REQUIRE(std::getline(in, line));

  std::vector<std::string> fields;
  std::istringstream ls(line);
  std::string tok;
  while (std::getline(ls, tok, ',')) fields.push_back(tok);
  REQUIRE(fields.size() == 8);
  CHECK(fields[0] == "optimal");
  CHECK(fields[1] == "7");
  CHECK(fields[2] == "3");
  CHECK(std::stod(fields[3]) == row.min_error);
  CHECK(std::stod(fields[4]) == row.mean_error);
  CHECK(std::stod(fields[5]) == row.max_error);
  CHECK(std::stod(fields[6]) == row.bound_thm41);
  CHECK(std::stod(fields[7]) == row.bound_thm42);
}

TEST_CASE("json emission mirrors the csv fields") {
  TrialStats row;
  row.strategy = "uniform";
  row.c = 4;
  row.trials = 2;
  row.min_error = 0.25;
  row.mean_error = 0.5;
  row.max_error = 0.75;
  row.bound_thm41 = 3.5;
  row.bound_thm42 = 4.5;

  std::ostringstream out;
  emit_results({row, row}, OutputFormat::Json, out);
  const nlohmann::ordered_json parsed = nlohmann::ordered_json::parse(out.str());
  REQUIRE(parsed.is_array());
  REQUIRE(parsed.size() == 2);
  CHECK(parsed[0].at("strategy") == "uniform");
  CHECK(parsed[0].at("c") == 4);
  CHECK(parsed[0].at("trials") == 2);
  CHECK(parsed[0].at("min_error") == 0.25);
  CHECK(parsed[0].at("mean_error") == 0.5);
  CHECK(parsed[0].at("max_error") == 0.75);
  CHECK(parsed[0].at("bound_thm41") == 3.5);
  CHECK(parsed[0].at("bound_thm42") == 4.5);
}

TEST_CASE("whole pipeline reruns byte-identically") {
  const ExperimentConfig cfg = synthetic_config();
  std::ostringstream first;
  std::ostringstream second;
  emit_results(run_error_experiment(cfg), OutputFormat::Csv, first);
  emit_results(run_error_experiment(cfg), OutputFormat::Csv, second);
  CHECK(first.str() == second.str());
  CHECK(first.str().find("optimal,4,10,") != std::string::npos);
}

TEST_CASE("a zero matrix is rejected") {
  ExperimentConfig cfg = synthetic_config();
  const Matrix<double> zero = Matrix<double>::Zero(3, 5);
  CHECK_THROWS_AS(run_error_experiment(cfg, zero), ZeroMatrixError);
}

TEST_CASE("missing config file raises an error") {
  CHECK_THROWS_AS(load_experiment_config("/nonexistent/gramsample_config.json"), Error);
}
