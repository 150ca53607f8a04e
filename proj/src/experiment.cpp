#include "gramsample/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "gramsample/bounds.hpp"
#include "gramsample/io.hpp"
#include "gramsample/matcore.hpp"
#include "gramsample/sampler.hpp"
#include "gramsample/synth.hpp"

namespace gramsample {

namespace {

using nlohmann::ordered_json;

ProbKind kind_from_string(const std::string& name) {
  if (name == "optimal") return ProbKind::Optimal;
  if (name == "leverage") return ProbKind::Leverage;
  if (name == "uniform") return ProbKind::Uniform;
  if (name == "nearly-optimal") return ProbKind::NearlyOptimal;
  throw InvalidArgumentError("unknown strategy '" + name + "'");
}

OutputFormat format_from_string(const std::string& name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw InvalidArgumentError("unknown output format '" + name + "'");
}

OutputFormat format_from_path(const std::string& path) {
  const std::size_t dot = path.find_last_of('.');
  if (dot != std::string::npos && path.substr(dot) == ".json") return OutputFormat::Json;
  return OutputFormat::Csv;
}

void parse_matrix_field(const ordered_json& j, ExperimentConfig& cfg) {
  if (j.is_string()) {
    cfg.matrix_file = j.get<std::string>();
    return;
  }
  if (!j.is_object()) throw InvalidArgumentError("config: 'matrix' must be a path or an object");
  if (j.contains("file")) {
    cfg.matrix_file = j.at("file").get<std::string>();
    return;
  }
  if (!j.contains("synthetic")) {
    throw InvalidArgumentError("config: 'matrix' needs either 'file' or 'synthetic'");
  }
  const ordered_json& s = j.at("synthetic");
  cfg.use_synthetic = true;
  cfg.synthetic.rows = s.at("rows").get<Index>();
  cfg.synthetic.cols = s.at("cols").get<Index>();
  cfg.synthetic.spectrum = s.at("spectrum").get<std::vector<double>>();
  cfg.synthetic.seed = s.value("seed", std::uint64_t(0));
}

ExperimentConfig parse_config_json(const ordered_json& j) {
  ExperimentConfig cfg;
  if (!j.contains("matrix")) throw InvalidArgumentError("config: missing 'matrix'");
  parse_matrix_field(j.at("matrix"), cfg);

  if (!j.contains("c_grid")) throw InvalidArgumentError("config: missing 'c_grid'");
  cfg.c_grid = j.at("c_grid").get<std::vector<Index>>();
  if (cfg.c_grid.empty()) throw InvalidArgumentError("config: 'c_grid' must be non-empty");
  for (Index c : cfg.c_grid) {
    if (c < 1) throw InvalidArgumentError("config: every c must be >= 1");
  }

  cfg.trials = j.value("trials", 100);
  if (cfg.trials < 1) throw InvalidArgumentError("config: 'trials' must be >= 1");
  cfg.seed = j.value("seed", std::uint64_t(0));
  cfg.delta = j.value("delta", 0.01);
  if (!(cfg.delta > 0.0) || !(cfg.delta < 1.0)) {
    throw InvalidArgumentError("config: 'delta' must lie in (0, 1)");
  }
  cfg.beta = j.value("beta", 1.0);
  if (!(cfg.beta > 0.0) || cfg.beta > 1.0) {
    throw InvalidArgumentError("config: 'beta' must lie in (0, 1]");
  }
  if (j.contains("epsilon")) {
    cfg.epsilon = j.at("epsilon").get<double>();
    if (!(cfg.epsilon > 0.0)) throw InvalidArgumentError("config: 'epsilon' must be positive");
  }
  cfg.threads = j.value("threads", 0);
  if (cfg.threads < 0) throw InvalidArgumentError("config: 'threads' must be >= 0");

  if (!j.contains("strategies")) throw InvalidArgumentError("config: missing 'strategies'");
  for (const ordered_json& s : j.at("strategies")) {
    cfg.strategies.push_back(kind_from_string(s.get<std::string>()));
  }
  if (cfg.strategies.empty()) {
    throw InvalidArgumentError("config: 'strategies' must be non-empty");
  }

  if (j.contains("output")) {
    const ordered_json& o = j.at("output");
    if (o.is_string()) {
      cfg.output_path = o.get<std::string>();
      cfg.format = format_from_path(cfg.output_path);
    } else {
      cfg.output_path = o.value("path", std::string());
      cfg.format = o.contains("format") ? format_from_string(o.at("format").get<std::string>())
                                        : format_from_path(cfg.output_path);
    }
  }
  return cfg;
}

ProbabilityVector<double> strategy_probs(ProbKind kind, const Matrix<double>& a, double beta) {
  switch (kind) {
    case ProbKind::Optimal: return optimal_probs(a);
    case ProbKind::Leverage: return leverage_probs(a);
    case ProbKind::Uniform: return uniform_probs<double>(a.cols());
    case ProbKind::NearlyOptimal: return nearly_optimal_mix(a, beta);
  }
  throw InvalidArgumentError("unknown strategy kind");
}

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgumentError(std::string("config: ") + e.what());
  }
  try {
    return parse_config_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgumentError(std::string("config: ") + e.what());
  }
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_experiment_config(buf.str());
}

Matrix<double> resolve_matrix(const ExperimentConfig& cfg) {
  if (cfg.use_synthetic) {
    return synth_matrix(cfg.synthetic.rows, cfg.synthetic.cols, cfg.synthetic.spectrum,
                        cfg.synthetic.seed);
  }
  return load_matrix(cfg.matrix_file);
}

std::vector<TrialStats> run_error_experiment(const ExperimentConfig& cfg,
                                             const Matrix<double>& a) {
  const Matrix<double> g = gram(a);
  const double norm_g = spectral_norm_sym(g);
  if (!(norm_g > 0.0)) throw ZeroMatrixError("run_error_experiment: zero matrix");
  const SpectralSummary<double> summary = spectral_summary(a);

  std::vector<ProbabilityVector<double>> probs;
  probs.reserve(cfg.strategies.size());
  for (ProbKind kind : cfg.strategies) probs.push_back(strategy_probs(kind, a, cfg.beta));

  const std::size_t n_cells = cfg.strategies.size() * cfg.c_grid.size();
  const std::size_t n_tasks = n_cells * static_cast<std::size_t>(cfg.trials);
  std::vector<double> errors(n_tasks, 0.0);

  std::atomic<std::size_t> next_task{0};
  std::atomic<bool> failed{false};
  std::mutex failure_mutex;
  std::string failure_message;

  auto worker = [&]() {
    for (;;) {
      const std::size_t task = next_task.fetch_add(1);
      if (task >= n_tasks || failed.load()) return;
      const std::size_t cell = task / static_cast<std::size_t>(cfg.trials);
      const int trial = static_cast<int>(task % static_cast<std::size_t>(cfg.trials));
      const std::size_t si = cell / cfg.c_grid.size();
      const std::size_t ci = cell % cfg.c_grid.size();
      try {
        RandomStream stream(cfg.seed, static_cast<std::uint64_t>(trial));
        GramApproximation<double> approx =
            approximate_gram(a, probs[si], cfg.c_grid[ci], stream);
        errors[task] = spectral_norm_sym(Matrix<double>(approx.x - g)) / norm_g;
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failed.exchange(true)) {
          failure_message = "trial failed (strategy=" +
                            std::string(to_string(cfg.strategies[si])) +
                            ", c=" + std::to_string(cfg.c_grid[ci]) +
                            ", trial=" + std::to_string(trial) +
                            ", seed=" + std::to_string(cfg.seed) + "): " + e.what();
        }
        return;
      }
    }
  };

  unsigned n_threads = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                       : std::max(1u, std::thread::hardware_concurrency());
  n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, n_tasks));
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (failed.load()) throw Error(failure_message);

  std::vector<TrialStats> stats;
  stats.reserve(n_cells);
  const bool has_epsilon = std::isfinite(cfg.epsilon);
  for (std::size_t si = 0; si < cfg.strategies.size(); ++si) {
    BoundQuery q;
    q.delta = cfg.delta;
    q.beta = cfg.strategies[si] == ProbKind::NearlyOptimal ? cfg.beta : 1.0;
    q.stable_rank = summary.stable_rank;
    q.rank = summary.rank;
    for (std::size_t ci = 0; ci < cfg.c_grid.size(); ++ci) {
      TrialStats row;
      row.strategy = to_string(cfg.strategies[si]);
      row.c = cfg.c_grid[ci];
      row.trials = cfg.trials;
      const std::size_t base = (si * cfg.c_grid.size() + ci) * static_cast<std::size_t>(cfg.trials);
      double lo = errors[base];
      double hi = errors[base];
      double sum = 0.0;
      int successes = 0;
      for (int t = 0; t < cfg.trials; ++t) {
        const double e = errors[base + static_cast<std::size_t>(t)];
        lo = std::min(lo, e);
        hi = std::max(hi, e);
        sum += e;
        if (has_epsilon && e <= cfg.epsilon) ++successes;
      }
      row.min_error = lo;
      row.max_error = hi;
      row.mean_error = sum / cfg.trials;
      if (has_epsilon) row.success_rate = static_cast<double>(successes) / cfg.trials;
      row.bound_thm41 = gram_error_bound(q, row.c, GramBound::Thm41);
      row.bound_thm42 = gram_error_bound(q, row.c, GramBound::Thm42);
      stats.push_back(std::move(row));
    }
  }
  return stats;
}

std::vector<TrialStats> run_error_experiment(const ExperimentConfig& cfg) {
  return run_error_experiment(cfg, resolve_matrix(cfg));
}

std::vector<double> probability_ratio_report(const Matrix<double>& a) {
  const ProbabilityVector<double> opt = optimal_probs(a);
  const ProbabilityVector<double> lev = leverage_probs(a);
  std::vector<double> ratios;
  ratios.reserve(static_cast<std::size_t>(a.cols()));
  for (Index j = 0; j < a.cols(); ++j) {
    if (opt.probs(j) > 0.0) ratios.push_back(lev.probs(j) / opt.probs(j));
  }
  std::sort(ratios.begin(), ratios.end());
  return ratios;
}

void emit_results(const std::vector<TrialStats>& stats, OutputFormat format, std::ostream& out) {
  if (format == OutputFormat::Csv) {
    out << "strategy,c,trials,min_error,mean_error,max_error,bound_thm41,bound_thm42\n";
    for (const TrialStats& row : stats) {
      out << row.strategy << ',' << row.c << ',' << row.trials << ','
          << format_real(row.min_error) << ',' << format_real(row.mean_error) << ','
          << format_real(row.max_error) << ',' << format_real(row.bound_thm41) << ','
          << format_real(row.bound_thm42) << '\n';
    }
    return;
  }
  ordered_json rows = ordered_json::array();
  for (const TrialStats& row : stats) {
    ordered_json r;
    r["strategy"] = row.strategy;
    r["c"] = row.c;
    r["trials"] = row.trials;
    r["min_error"] = row.min_error;
    r["mean_error"] = row.mean_error;
    r["max_error"] = row.max_error;
    r["bound_thm41"] = row.bound_thm41;
    r["bound_thm42"] = row.bound_thm42;
    rows.push_back(std::move(r));
  }
  out << rows.dump(2) << '\n';
}

void emit_results(const std::vector<TrialStats>& stats, OutputFormat format,
                  const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  emit_results(stats, format, out);
}

}  // namespace gramsample
