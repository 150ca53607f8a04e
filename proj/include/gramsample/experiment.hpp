#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "gramsample/core.hpp"
#include "gramsample/probmodel.hpp"

namespace gramsample {

enum class OutputFormat { Csv, Json };

struct SyntheticSpec {
  Index rows = 0;
  Index cols = 0;
  std::vector<double> spectrum;
  std::uint64_t seed = 0;
};

/// Experiment description, normally parsed from a JSON config. Exactly one
/// of matrix_file / synthetic is active. epsilon, when finite, is the
/// success threshold used for the empirical success rate; beta feeds the
/// nearly-optimal strategy.
struct ExperimentConfig {
  std::string matrix_file;
  SyntheticSpec synthetic;
  bool use_synthetic = false;

  std::vector<Index> c_grid;
  int trials = 100;
  std::uint64_t seed = 0;
  double delta = 0.01;
  double beta = 1.0;
  double epsilon = std::numeric_limits<double>::quiet_NaN();
  std::vector<ProbKind> strategies;

  std::string output_path;
  OutputFormat format = OutputFormat::Csv;
  int threads = 0;
};

/// Aggregated relative spectral-norm errors for one (strategy, c) cell,
/// with the two analytic error curves evaluated at the same c for overlay.
/// success_rate is the fraction of trials with error <= config epsilon, NaN
/// when no epsilon was configured.
struct TrialStats {
  std::string strategy;
  Index c = 0;
  int trials = 0;
  double min_error = 0.0;
  double mean_error = 0.0;
  double max_error = 0.0;
  double success_rate = std::numeric_limits<double>::quiet_NaN();
  double bound_thm41 = 0.0;
  double bound_thm42 = 0.0;
};

ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::string& path);

Matrix<double> resolve_matrix(const ExperimentConfig& cfg);

/// Runs trials for every (strategy, c) pair. Trial t of every cell uses the
/// deterministic stream (config seed, stream id t), so strategies and sample
/// sizes see common random numbers and the -- possibly multi-threaded -- run
/// is bit-reproducible. A trial failure aborts the run with the failing
/// (strategy, c, trial) in the message.
std::vector<TrialStats> run_error_experiment(const ExperimentConfig& cfg,
                                             const Matrix<double>& a);
std::vector<TrialStats> run_error_experiment(const ExperimentConfig& cfg);

/// Ratios leverage_prob / optimal_prob over the columns with positive norm,
/// sorted ascending; a spread far from 1 signals that the two samplings
/// disagree on which columns matter.
std::vector<double> probability_ratio_report(const Matrix<double>& a);

/// Writes rows as CSV (header strategy,c,trials,min_error,mean_error,
/// max_error,bound_thm41,bound_thm42; reals at 17 significant digits) or as
/// a JSON array mirroring the same fields.
void emit_results(const std::vector<TrialStats>& stats, OutputFormat format, std::ostream& out);
void emit_results(const std::vector<TrialStats>& stats, OutputFormat format,
                  const std::string& path);

}  // namespace gramsample
