#pragma once

#include <cmath>

#include "gramsample/core.hpp"
#include "gramsample/matcore.hpp"

namespace gramsample {

enum class ProbKind { Optimal, Leverage, Uniform, NearlyOptimal };

inline const char* to_string(ProbKind kind) {
  switch (kind) {
    case ProbKind::Optimal: return "optimal";
    case ProbKind::Leverage: return "leverage";
    case ProbKind::Uniform: return "uniform";
    case ProbKind::NearlyOptimal: return "nearly-optimal";
  }
  return "unknown";
}

/// Discrete distribution over the columns of a matrix. probs is entrywise
/// non-negative and sums to one; beta is the mixing weight used to build a
/// nearly-optimal vector (1 for the other kinds).
template <typename Scalar>
struct ProbabilityVector {
  Vector<Scalar> probs;
  ProbKind kind = ProbKind::Uniform;
  Scalar beta = 1;
};

/// p_j proportional to the squared norm of column j.
template <typename Derived>
ProbabilityVector<typename Derived::Scalar> optimal_probs(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  Vector<Scalar> sq = a.derived().colwise().squaredNorm();
  const Scalar total = sq.sum();
  if (!(total > Scalar(0))) throw ZeroMatrixError("optimal_probs: zero matrix");
  ProbabilityVector<Scalar> p;
  p.probs = sq / total;
  p.kind = ProbKind::Optimal;
  return p;
}

/// p_j proportional to the leverage score of column j, i.e. the squared norm
/// of row j of the right singular factor truncated at the numerical rank.
template <typename Derived>
ProbabilityVector<typename Derived::Scalar> leverage_probs(
    const Eigen::MatrixBase<Derived>& a,
    typename Derived::Scalar rel_tol = typename Derived::Scalar(-1)) {
  using Scalar = typename Derived::Scalar;
  ThinSvd<Scalar> svd = thin_svd(a, rel_tol);
  ProbabilityVector<Scalar> p;
  p.probs = svd.v.rowwise().squaredNorm() / Scalar(svd.rank);
  p.kind = ProbKind::Leverage;
  return p;
}

template <typename Scalar = double>
ProbabilityVector<Scalar> uniform_probs(Index n) {
  if (n < 1) throw InvalidArgumentError("uniform_probs: need at least one column");
  ProbabilityVector<Scalar> p;
  p.probs = Vector<Scalar>::Constant(n, Scalar(1) / Scalar(n));
  p.kind = ProbKind::Uniform;
  return p;
}

/// beta * optimal + (1 - beta) * uniform, beta in (0, 1]. Every entry is at
/// least beta times the optimal probability of the same column.
template <typename Derived>
ProbabilityVector<typename Derived::Scalar> nearly_optimal_mix(
    const Eigen::MatrixBase<Derived>& a, typename Derived::Scalar beta) {
  using Scalar = typename Derived::Scalar;
  if (!(beta > Scalar(0)) || beta > Scalar(1)) {
    throw InvalidArgumentError("nearly_optimal_mix: beta must lie in (0, 1]");
  }
  ProbabilityVector<Scalar> opt = optimal_probs(a);
  const Index n = opt.probs.size();
  ProbabilityVector<Scalar> p;
  p.probs = beta * opt.probs.array() + (Scalar(1) - beta) / Scalar(n);
  p.kind = ProbKind::NearlyOptimal;
  p.beta = beta;
  return p;
}

/// Largest beta such that probs_j >= beta * optimal_j for every column with
/// nonzero norm: the minimum of probs_j * ||A||_F^2 / ||A_j||^2 over those
/// columns.
template <typename Scalar, typename Derived>
Scalar effective_beta(const Vector<Scalar>& probs, const Eigen::MatrixBase<Derived>& a) {
  if (probs.size() != a.cols()) {
    throw DimensionMismatchError("effective_beta: probability length must match column count");
  }
  Vector<Scalar> sq = a.derived().colwise().squaredNorm();
  const Scalar total = sq.sum();
  if (!(total > Scalar(0))) throw ZeroMatrixError("effective_beta: zero matrix");
  Scalar beta = std::numeric_limits<Scalar>::infinity();
  for (Index j = 0; j < probs.size(); ++j) {
    if (sq(j) > Scalar(0)) beta = std::min(beta, probs(j) * total / sq(j));
  }
  return beta;
}

template <typename Scalar, typename Derived>
Scalar effective_beta(const ProbabilityVector<Scalar>& p, const Eigen::MatrixBase<Derived>& a) {
  return effective_beta(p.probs, a);
}

}  // namespace gramsample
