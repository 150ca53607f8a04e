#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gramsample/bounds.hpp"
#include "gramsample/exactrep.hpp"
#include "gramsample/experiment.hpp"
#include "gramsample/io.hpp"
#include "gramsample/matcore.hpp"
#include "gramsample/probmodel.hpp"
#include "gramsample/sampler.hpp"

namespace {

using namespace gramsample;

std::string real17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

ProbKind parse_kind(const std::string& name) {
  if (name == "optimal") return ProbKind::Optimal;
  if (name == "leverage") return ProbKind::Leverage;
  if (name == "uniform") return ProbKind::Uniform;
  if (name == "nearly-optimal") return ProbKind::NearlyOptimal;
  throw InvalidArgumentError("unknown kind '" + name + "'");
}

ProbabilityVector<double> build_probs(const Matrix<double>& a, ProbKind kind, double beta) {
  switch (kind) {
    case ProbKind::Optimal: return optimal_probs(a);
    case ProbKind::Leverage: return leverage_probs(a);
    case ProbKind::Uniform: return uniform_probs<double>(a.cols());
    case ProbKind::NearlyOptimal: return nearly_optimal_mix(a, beta);
  }
  throw InvalidArgumentError("unknown kind");
}

std::vector<Index> to_zero_based(const std::vector<long long>& one_based, Index n) {
  std::vector<Index> out;
  out.reserve(one_based.size());
  for (long long i : one_based) {
    if (i < 1 || i > n) {
      throw InvalidArgumentError("index " + std::to_string(i) + " out of range [1, " +
                                 std::to_string(n) + "]");
    }
    out.push_back(static_cast<Index>(i - 1));
  }
  return out;
}

void run_probs(const std::string& path, const std::string& kind_name, double beta,
               const std::string& output) {
  const Matrix<double> a = load_matrix(path);
  const ProbabilityVector<double> p = build_probs(a, parse_kind(kind_name), beta);

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!output.empty()) {
    file.open(output);
    if (!file) throw Error("cannot open '" + output + "' for writing");
    out = &file;
  }
  *out << "index,probability\n";
  for (Index j = 0; j < p.probs.size(); ++j) {
    *out << (j + 1) << ',' << real17(p.probs(j)) << '\n';
  }
}

void run_approx(const std::string& path, long long c, const std::string& kind_name, double beta,
                std::uint64_t seed, const std::string& emit_x) {
  const Matrix<double> a = load_matrix(path);
  const ProbabilityVector<double> p = build_probs(a, parse_kind(kind_name), beta);
  RandomStream stream(seed, 0);
  const GramApproximation<double> approx = approximate_gram(a, p, static_cast<Index>(c), stream);
  const Matrix<double> g = gram(a);
  std::cout << "relative_error=" << real17(relative_error_2norm(approx.x, g)) << '\n';
  if (!emit_x.empty()) write_dense_csv(approx.x, emit_x);
}

void run_bounds(const std::string& target, const std::string& method_name,
                const std::string& sampling_name, const BoundQuery& q, long long c) {
  const SamplingScheme sampling =
      sampling_name == "uniform" ? SamplingScheme::Uniform : SamplingScheme::NearlyOptimal;
  const bool have_c = c > 0;

  if (target == "gram") {
    GramBound which;
    if (method_name == "thm41") {
      which = GramBound::Thm41;
    } else if (method_name == "thm42") {
      which = GramBound::Thm42;
    } else if (method_name == "thm51") {
      which = GramBound::Thm51;
    } else {
      throw InvalidArgumentError("gram bounds take --method thm41|thm42|thm51");
    }
    if (have_c) {
      std::cout << "error_bound=" << real17(gram_error_bound(q, c, which)) << " tag="
                << method_name << '\n';
      return;
    }
    const BoundResult r = samples_for_gram(q, which);
    std::cout << "required_c=" << r.required_c << " constant=" << real17(r.constant_used)
              << " tag=" << r.theorem_tag << '\n';
    return;
  }

  TailMethod method;
  if (method_name == "matmult") {
    method = TailMethod::MatMult;
  } else if (method_name == "chernoff") {
    method = TailMethod::Chernoff;
  } else {
    throw InvalidArgumentError(target + " bounds take --method matmult|chernoff");
  }

  if (target == "smin") {
    if (have_c) {
      const double eps = epsilon_for_smin(q, c, method, sampling);
      std::cout << "error_bound=" << real17(eps)
                << " sigma_min_bound=" << real17(std::sqrt(1.0 - eps)) << '\n';
      return;
    }
    const BoundResult r = samples_for_smin(q, method, sampling);
    std::cout << "required_c=" << r.required_c << " constant=" << real17(r.constant_used)
              << " tag=" << r.theorem_tag << '\n';
    return;
  }
  if (target == "cond") {
    if (have_c) {
      const double eps = epsilon_for_cond(q, c, method, sampling);
      std::cout << "error_bound=" << real17(eps) << " kappa_bound="
                << real17(std::sqrt((1.0 + eps) / (1.0 - eps))) << '\n';
      return;
    }
    const BoundResult r = samples_for_cond(q, method, sampling);
    std::cout << "required_c=" << r.required_c << " constant=" << real17(r.constant_used)
              << " tag=" << r.theorem_tag << '\n';
    return;
  }
  throw InvalidArgumentError("unknown bounds target '" + target + "'");
}

void print_weights(const Vector<double>& w) {
  std::cout << "weights=";
  for (Index j = 0; j < w.size(); ++j) {
    if (j > 0) std::cout << ',';
    std::cout << real17(w(j));
  }
  std::cout << '\n';
}

void run_exact_check(const std::string& path, const std::vector<long long>& indices_1b,
                     const std::vector<double>& weights_in, double tol) {
  const Matrix<double> a = load_matrix(path);
  const Matrix<double> g = gram(a);
  const double g_norm = g.norm();
  const ThinSvd<double> svd = thin_svd(a);
  const std::vector<Index> indices = to_zero_based(indices_1b, a.cols());
  const Index c = static_cast<Index>(indices.size());

  auto report = [&](const WeightMatrix<double>& w) {
    const double residual = (reconstruct(a, indices, w) - g).norm() / g_norm;
    std::cout << "residual=" << real17(residual) << '\n';
    std::cout << "exact=" << (residual <= tol ? "yes" : "no") << '\n';
  };

  if (!weights_in.empty()) {
    Vector<double> w = Eigen::Map<const Vector<double>>(weights_in.data(),
                                                        static_cast<Index>(weights_in.size()));
    const bool ok = exactness_check(svd.v, indices, w, tol);
    std::cout << "check=" << (ok ? "pass" : "fail") << '\n';
    report(WeightMatrix<double>::diagonal_form(w));
    return;
  }

  if (svd.rank == 1) {
    const Vector<double> w = rank_one_weights(a, indices);
    print_weights(w);
    report(WeightMatrix<double>::diagonal_form(w));
    return;
  }
  if (c == svd.rank) {
    const SubsetWeights<double> sw = subset_weights(svd.v, indices, tol);
    print_weights(sw.weights);
    std::cout << "check=" << (sw.valid ? "pass" : "fail") << '\n';
    report(WeightMatrix<double>::diagonal_form(sw.weights));
    return;
  }
  const WeightMatrix<double> w = optimal_weight_matrix(a, indices);
  std::cout << "weight_matrix=full\n";
  report(w);
}

void run_experiment(const std::string& config_path) {
  const ExperimentConfig cfg = load_experiment_config(config_path);
  const std::vector<TrialStats> stats = run_error_experiment(cfg);
  if (cfg.output_path.empty()) {
    emit_results(stats, cfg.format, std::cout);
  } else {
    emit_results(stats, cfg.format, cfg.output_path);
    std::cout << "wrote " << stats.size() << " rows to " << cfg.output_path << '\n';
  }
  if (std::isfinite(cfg.epsilon)) {
    for (const TrialStats& row : stats) {
      std::cout << "strategy=" << row.strategy << " c=" << row.c
                << " success_rate=" << real17(row.success_rate) << '\n';
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized column-sampling approximation of Gram products"};
  app.require_subcommand(1);

  const std::vector<std::string> kinds = {"optimal", "leverage", "uniform", "nearly-optimal"};

  auto* probs_cmd = app.add_subcommand("probs", "Column sampling probabilities for a matrix");
  std::string probs_path, probs_kind, probs_output;
  double probs_beta = 1.0;
  probs_cmd->add_option("matrix", probs_path, "Matrix file (.mtx/.mm or .csv)")->required();
  probs_cmd->add_option("--kind", probs_kind, "Probability family")
      ->required()
      ->check(CLI::IsMember(kinds));
  probs_cmd->add_option("--beta", probs_beta, "Mixing weight for nearly-optimal");
  probs_cmd->add_option("--output", probs_output, "Write CSV here instead of stdout");

  auto* approx_cmd = app.add_subcommand("approx", "Monte Carlo approximation of A * A^T");
  std::string approx_path, approx_kind, approx_emit;
  long long approx_c = 0;
  double approx_beta = 1.0;
  std::uint64_t approx_seed = 0;
  approx_cmd->add_option("matrix", approx_path, "Matrix file (.mtx/.mm or .csv)")->required();
  approx_cmd->add_option("-c,--c", approx_c, "Number of sampled columns")->required();
  approx_cmd->add_option("--kind", approx_kind, "Probability family")
      ->required()
      ->check(CLI::IsMember(kinds));
  approx_cmd->add_option("--beta", approx_beta, "Mixing weight for nearly-optimal");
  approx_cmd->add_option("--seed", approx_seed, "Random seed");
  approx_cmd->add_option("--emit-x", approx_emit, "Write the approximation as CSV");

  auto* bounds_cmd = app.add_subcommand("bounds", "Sample-size and error bounds");
  std::string bounds_target, bounds_method, bounds_sampling = "nearly-optimal";
  BoundQuery query;
  long long bounds_c = 0;
  bounds_cmd->add_option("target", bounds_target, "Bound family")
      ->required()
      ->check(CLI::IsMember({"gram", "smin", "cond"}));
  bounds_cmd->add_option("--eps", query.epsilon, "Target relative error");
  bounds_cmd->add_option("--delta", query.delta, "Failure probability");
  bounds_cmd->add_option("--beta", query.beta, "Mixing weight of the sampling probabilities");
  bounds_cmd->add_option("--sr", query.stable_rank, "Stable rank");
  bounds_cmd->add_option("--rank", query.rank, "Rank");
  bounds_cmd->add_option("--m", query.m, "Row count");
  bounds_cmd->add_option("--n", query.n, "Column count");
  bounds_cmd->add_option("--mu", query.mu, "Coherence");
  bounds_cmd->add_option("--method", bounds_method, "Bound variant")
      ->required()
      ->check(CLI::IsMember({"thm41", "thm42", "thm51", "matmult", "chernoff"}));
  bounds_cmd->add_option("--sampling", bounds_sampling, "Sampling scheme")
      ->check(CLI::IsMember({"nearly-optimal", "uniform"}));
  bounds_cmd->add_option("--c", bounds_c, "Evaluate the error bound at this sample count");

  auto* exact_cmd = app.add_subcommand("exact-check", "Deterministic exact-reconstruction check");
  std::string exact_path;
  std::vector<long long> exact_indices;
  std::vector<double> exact_weights;
  double exact_tol = 1e-8;
  exact_cmd->add_option("matrix", exact_path, "Matrix file (.mtx/.mm or .csv)")->required();
  exact_cmd->add_option("--indices", exact_indices, "1-based column indices, comma-separated")
      ->required()
      ->delimiter(',');
  exact_cmd->add_option("--weights", exact_weights, "Weights, comma-separated")->delimiter(',');
  exact_cmd->add_option("--tol", exact_tol, "Exactness tolerance");

  auto* exp_cmd = app.add_subcommand("experiment", "Run an error experiment from a JSON config");
  std::string exp_config;
  exp_cmd->add_option("--config", exp_config, "JSON config file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (probs_cmd->parsed()) {
      run_probs(probs_path, probs_kind, probs_beta, probs_output);
    } else if (approx_cmd->parsed()) {
      run_approx(approx_path, approx_c, approx_kind, approx_beta, approx_seed, approx_emit);
    } else if (bounds_cmd->parsed()) {
      run_bounds(bounds_target, bounds_method, bounds_sampling, query, bounds_c);
    } else if (exact_cmd->parsed()) {
      run_exact_check(exact_path, exact_indices, exact_weights, exact_tol);
    } else if (exp_cmd->parsed()) {
      run_experiment(exp_config);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
