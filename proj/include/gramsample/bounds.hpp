#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

#include "gramsample/core.hpp"

namespace gramsample {

/// Inputs for the sample-size and error-bound formulas. Only the fields an
/// operation actually uses are validated by it: gram bounds read
/// (epsilon, delta, beta, stable_rank, rank); singular-value and condition
/// bounds read (epsilon, delta, beta, m) and additionally (n, mu) under
/// uniform sampling.
struct BoundQuery {
  double epsilon = 0.5;
  double delta = 0.01;
  double beta = 1.0;
  double stable_rank = 1.0;
  std::int64_t rank = 1;
  std::int64_t m = 1;
  std::int64_t n = 1;
  double mu = 1.0;
};

struct BoundResult {
  std::int64_t required_c = 0;
  double constant_used = 0.0;
  std::string theorem_tag;
};

enum class GramBound { Thm41, Thm42, Thm51 };
enum class TailMethod { MatMult, Chernoff };
enum class SamplingScheme { NearlyOptimal, Uniform };

/// 2 + 2 eps / 3 on (0, 1].
inline double bernstein_constant(double eps) {
  if (!(eps > 0.0) || eps > 1.0) {
    throw InvalidArgumentError("bernstein_constant: epsilon must lie in (0, 1]");
  }
  return 2.0 + 2.0 * eps / 3.0;
}

/// eps^2 / ((1 - eps) ln(1 - eps) + eps) on (0, 1); decreasing from 2 to 1,
/// with the limit value 1 at eps = 1.
inline double chernoff_lower_constant(double eps) {
  if (!(eps > 0.0) || eps > 1.0) {
    throw InvalidArgumentError("chernoff_lower_constant: epsilon must lie in (0, 1]");
  }
  if (eps == 1.0) return 1.0;
  return eps * eps / ((1.0 - eps) * std::log1p(-eps) + eps);
}

/// eps^2 / ((1 + eps) ln(1 + eps) - eps) on (0, 1]; increasing from 2 to
/// 1 / (2 ln 2 - 1).
inline double chernoff_two_sided_constant(double eps) {
  if (!(eps > 0.0) || eps > 1.0) {
    throw InvalidArgumentError("chernoff_two_sided_constant: epsilon must lie in (0, 1]");
  }
  return eps * eps / ((1.0 + eps) * std::log1p(eps) - eps);
}

/// Error-bound kernel gamma + sqrt(gamma (6 + gamma)), gamma >= 0.
inline double epsilon_from_gamma(double gamma) {
  if (!(gamma >= 0.0)) throw InvalidArgumentError("epsilon_from_gamma: gamma must be >= 0");
  return gamma + std::sqrt(gamma * (6.0 + gamma));
}

namespace detail {

inline void check_delta(double delta, const char* who) {
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw InvalidArgumentError(std::string(who) + ": delta must lie in (0, 1)");
  }
}

inline void check_beta(double beta, const char* who) {
  if (!(beta > 0.0) || beta > 1.0) {
    throw InvalidArgumentError(std::string(who) + ": beta must lie in (0, 1]");
  }
}

inline void check_gram_query(const BoundQuery& q, const char* who) {
  check_delta(q.delta, who);
  check_beta(q.beta, who);
  if (!(q.stable_rank >= 1.0)) {
    throw InvalidArgumentError(std::string(who) + ": stable rank must be >= 1");
  }
  if (q.rank < 1) throw InvalidArgumentError(std::string(who) + ": rank must be >= 1");
  if (q.stable_rank > static_cast<double>(q.rank) * (1.0 + 1e-12)) {
    throw InvalidArgumentError(std::string(who) + ": stable rank cannot exceed rank");
  }
}

inline void check_spectral_query(const BoundQuery& q, SamplingScheme sampling, const char* who) {
  check_delta(q.delta, who);
  if (q.m < 1) throw InvalidArgumentError(std::string(who) + ": m must be >= 1");
  if (sampling == SamplingScheme::NearlyOptimal) {
    check_beta(q.beta, who);
  } else {
    if (q.n < 1) throw InvalidArgumentError(std::string(who) + ": n must be >= 1");
    if (!(q.mu > 0.0) || q.mu > 1.0) {
      throw InvalidArgumentError(std::string(who) + ": coherence must lie in (0, 1]");
    }
  }
}

inline std::int64_t ceil_count(double raw, const char* who) {
  if (!(raw > 0.0) || raw > 9.0e18) {
    throw InvalidArgumentError(std::string(who) + ": sample count out of range");
  }
  return static_cast<std::int64_t>(std::ceil(raw));
}

/// Mass term for the spectral bounds: m / beta under nearly-optimal
/// sampling, n * mu under uniform sampling.
inline double spectral_mass(const BoundQuery& q, SamplingScheme sampling) {
  if (sampling == SamplingScheme::NearlyOptimal) return static_cast<double>(q.m) / q.beta;
  return static_cast<double>(q.n) * q.mu;
}

}  // namespace detail

/// gamma entering the gram error bound at sample size c.
inline double gram_gamma(const BoundQuery& q, std::int64_t c, GramBound which) {
  detail::check_gram_query(q, "gram_gamma");
  if (c < 1) throw InvalidArgumentError("gram_gamma: c must be >= 1");
  const double cd = static_cast<double>(c);
  switch (which) {
    case GramBound::Thm41:
      return q.stable_rank * std::log(static_cast<double>(q.rank) / q.delta) / (3.0 * q.beta * cd);
    case GramBound::Thm42:
      return q.stable_rank * std::log(4.0 * q.stable_rank / q.delta) / (3.0 * q.beta * cd);
    case GramBound::Thm51:
      return static_cast<double>(q.rank) * std::log(static_cast<double>(q.rank) / q.delta) /
             (3.0 * cd);
  }
  throw InvalidArgumentError("gram_gamma: unknown bound");
}

/// Relative spectral-norm error guaranteed with probability 1 - delta when c
/// columns are sampled.
inline double gram_error_bound(const BoundQuery& q, std::int64_t c, GramBound which) {
  return epsilon_from_gamma(gram_gamma(q, c, which));
}

/// Samples sufficient for relative spectral-norm error epsilon with
/// probability 1 - delta.
inline BoundResult samples_for_gram(const BoundQuery& q, GramBound which) {
  detail::check_gram_query(q, "samples_for_gram");
  if (!(q.epsilon > 0.0) || q.epsilon > 1.0) {
    throw InvalidArgumentError("samples_for_gram: epsilon must lie in (0, 1]");
  }
  const double c0 = bernstein_constant(q.epsilon);
  const double eps_sq = q.epsilon * q.epsilon;
  double raw = 0.0;
  const char* tag = "";
  switch (which) {
    case GramBound::Thm41:
      raw = c0 * q.stable_rank * std::log(static_cast<double>(q.rank) / q.delta) /
            (q.beta * eps_sq);
      tag = "thm41";
      break;
    case GramBound::Thm42:
      raw = c0 * q.stable_rank * std::log(4.0 * q.stable_rank / q.delta) / (q.beta * eps_sq);
      tag = "thm42";
      break;
    case GramBound::Thm51:
      raw = c0 * static_cast<double>(q.rank) * std::log(static_cast<double>(q.rank) / q.delta) /
            eps_sq;
      tag = "thm51";
      break;
  }
  return BoundResult{detail::ceil_count(raw, "samples_for_gram"), c0, tag};
}

/// Samples sufficient for sigma_min(Q S) >= sqrt(1 - epsilon) with
/// probability 1 - delta, for a row-orthonormal Q.
inline BoundResult samples_for_smin(const BoundQuery& q, TailMethod method,
                                    SamplingScheme sampling) {
  detail::check_spectral_query(q, sampling, "samples_for_smin");
  const bool chernoff = method == TailMethod::Chernoff;
  if (chernoff) {
    if (!(q.epsilon > 0.0) || !(q.epsilon < 1.0)) {
      throw InvalidArgumentError("samples_for_smin: epsilon must lie in (0, 1) for this method");
    }
  } else if (!(q.epsilon > 0.0) || q.epsilon > 1.0) {
    throw InvalidArgumentError("samples_for_smin: epsilon must lie in (0, 1]");
  }
  const double constant =
      chernoff ? chernoff_lower_constant(q.epsilon) : bernstein_constant(q.epsilon);
  const double raw = constant * detail::spectral_mass(q, sampling) *
                     std::log(static_cast<double>(q.m) / q.delta) / (q.epsilon * q.epsilon);
  return BoundResult{detail::ceil_count(raw, "samples_for_smin"), constant,
                     chernoff ? "smin-chernoff" : "smin-matmult"};
}

/// Samples sufficient for kappa(Q S) <= sqrt(1 + epsilon) / sqrt(1 - epsilon)
/// with probability 1 - delta, for a row-orthonormal Q.
inline BoundResult samples_for_cond(const BoundQuery& q, TailMethod method,
                                    SamplingScheme sampling) {
  detail::check_spectral_query(q, sampling, "samples_for_cond");
  if (!(q.epsilon > 0.0) || q.epsilon > 1.0) {
    throw InvalidArgumentError("samples_for_cond: epsilon must lie in (0, 1]");
  }
  const bool chernoff = method == TailMethod::Chernoff;
  const double constant =
      chernoff ? chernoff_two_sided_constant(q.epsilon) : bernstein_constant(q.epsilon);
  const double log_arg = chernoff ? 2.0 * static_cast<double>(q.m) / q.delta
                                  : static_cast<double>(q.m) / q.delta;
  const double raw = constant * detail::spectral_mass(q, sampling) * std::log(log_arg) /
                     (q.epsilon * q.epsilon);
  return BoundResult{detail::ceil_count(raw, "samples_for_cond"), constant,
                     chernoff ? "cond-chernoff" : "cond-matmult"};
}

/// Interval [sqrt(max(0, 1 - err)), sqrt(1 + err)] containing every singular
/// value of Q S when ||Q Q^T - (Q S)(Q S)^T||_2 <= err.
inline std::pair<double, double> sigma_bounds_from_gram_error(double err) {
  if (!(err >= 0.0)) {
    throw InvalidArgumentError("sigma_bounds_from_gram_error: error must be >= 0");
  }
  const double low = err >= 1.0 ? 0.0 : std::sqrt(1.0 - err);
  return {low, std::sqrt(1.0 + err)};
}

namespace detail {

/// Inverts a count formula that is strictly decreasing in epsilon: returns
/// the smallest epsilon whose raw (un-ceiled) sample requirement is at most
/// c. Throws when even the largest admissible epsilon needs more than c.
template <typename RawCount>
double invert_count(RawCount raw, std::int64_t c, double eps_hi, const char* who) {
  const double cd = static_cast<double>(c);
  if (raw(eps_hi) > cd) {
    throw InvalidArgumentError(std::string(who) +
                               ": sample count too small for any admissible epsilon");
  }
  double lo = 1e-12;
  double hi = eps_hi;
  if (raw(lo) <= cd) return lo;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (raw(mid) > cd) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

}  // namespace detail

/// Epsilon achieved by c samples under the smin bound (inverse of
/// samples_for_smin before rounding).
inline double epsilon_for_smin(const BoundQuery& q, std::int64_t c, TailMethod method,
                               SamplingScheme sampling) {
  detail::check_spectral_query(q, sampling, "epsilon_for_smin");
  if (c < 1) throw InvalidArgumentError("epsilon_for_smin: c must be >= 1");
  const double mass = detail::spectral_mass(q, sampling);
  const double logm = std::log(static_cast<double>(q.m) / q.delta);
  const bool chernoff = method == TailMethod::Chernoff;
  auto raw = [&](double eps) {
    const double constant = chernoff ? chernoff_lower_constant(eps) : bernstein_constant(eps);
    return constant * mass * logm / (eps * eps);
  };
  return detail::invert_count(raw, c, 1.0, "epsilon_for_smin");
}

/// Epsilon achieved by c samples under the condition-number bound (inverse
/// of samples_for_cond before rounding).
inline double epsilon_for_cond(const BoundQuery& q, std::int64_t c, TailMethod method,
                               SamplingScheme sampling) {
  detail::check_spectral_query(q, sampling, "epsilon_for_cond");
  if (c < 1) throw InvalidArgumentError("epsilon_for_cond: c must be >= 1");
  const double mass = detail::spectral_mass(q, sampling);
  const bool chernoff = method == TailMethod::Chernoff;
  const double logm = std::log((chernoff ? 2.0 : 1.0) * static_cast<double>(q.m) / q.delta);
  auto raw = [&](double eps) {
    const double constant = chernoff ? chernoff_two_sided_constant(eps) : bernstein_constant(eps);
    return constant * mass * logm / (eps * eps);
  };
  return detail::invert_count(raw, c, 1.0, "epsilon_for_cond");
}

}  // namespace gramsample
