#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "gramsample/core.hpp"
#include "gramsample/probmodel.hpp"
#include "gramsample/random.hpp"

namespace gramsample {

/// Result of sampling c column indices. probs is the distribution the draw
/// came from (uniform for without-replacement draws).
template <typename Scalar>
struct SampleDraw {
  std::vector<Index> indices;
  Vector<Scalar> probs;
  bool with_replacement = true;

  Index count() const { return static_cast<Index>(indices.size()); }
};

/// Column-selection-and-rescaling operator S. Column j of the dense n x c
/// form has its only nonzero, scales[j], in row indices[j]. The scaling makes
/// (AS)(AS)^T an unbiased estimator of A A^T.
template <typename Scalar>
struct SamplingMatrix {
  Index n = 0;
  std::vector<Index> indices;
  Vector<Scalar> scales;

  Index count() const { return static_cast<Index>(indices.size()); }

  Matrix<Scalar> dense() const {
    Matrix<Scalar> s = Matrix<Scalar>::Zero(n, count());
    for (Index j = 0; j < count(); ++j) s(indices[j], j) = scales(j);
    return s;
  }
};

/// c independent draws from the given distribution via inverse-CDF lookup.
/// A deviate maps to the lowest index whose cumulative mass strictly exceeds
/// it, so zero-probability columns are never selected.
template <typename Scalar>
SampleDraw<Scalar> draw_with_replacement(const ProbabilityVector<Scalar>& p, Index c,
                                         RandomStream& stream) {
  if (c < 1) throw InvalidArgumentError("draw_with_replacement: need at least one sample");
  const Index n = p.probs.size();
  if (n < 1) throw InvalidArgumentError("draw_with_replacement: empty distribution");

  std::vector<Scalar> cumulative(static_cast<std::size_t>(n));
  std::partial_sum(p.probs.data(), p.probs.data() + n, cumulative.begin());

  Index last_positive = -1;
  for (Index j = 0; j < n; ++j) {
    if (p.probs(j) > Scalar(0)) last_positive = j;
  }
  if (last_positive < 0) {
    throw InvalidArgumentError("draw_with_replacement: no positive probability mass");
  }

  SampleDraw<Scalar> draw;
  draw.indices.reserve(static_cast<std::size_t>(c));
  draw.probs = p.probs;
  draw.with_replacement = true;
  for (Index j = 0; j < c; ++j) {
    const Scalar u = static_cast<Scalar>(stream.next_double());
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    Index idx = (it == cumulative.end()) ? last_positive
                                         : static_cast<Index>(it - cumulative.begin());
    draw.indices.push_back(idx);
  }
  return draw;
}

/// c distinct indices drawn uniformly from {0, ..., n-1} by a partial
/// Fisher-Yates shuffle. probs is set to the uniform distribution so the
/// standard rescaling yields sqrt(n / c).
template <typename Scalar = double>
SampleDraw<Scalar> draw_uniform_without_replacement(Index n, Index c, RandomStream& stream) {
  if (n < 1) throw InvalidArgumentError("draw_uniform_without_replacement: empty index range");
  if (c < 1 || c > n) {
    throw InvalidArgumentError(
        "draw_uniform_without_replacement: sample count must lie in [1, n]");
  }

  std::vector<Index> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), Index(0));
  for (Index i = 0; i < c; ++i) {
    const Index j = i + static_cast<Index>(stream.next_below(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  pool.resize(static_cast<std::size_t>(c));

  SampleDraw<Scalar> draw;
  draw.indices = std::move(pool);
  draw.probs = Vector<Scalar>::Constant(n, Scalar(1) / Scalar(n));
  draw.with_replacement = false;
  return draw;
}

/// Rescaled selector for a draw: column j selects column indices[j] scaled by
/// 1 / sqrt(c * p_{indices[j]}).
template <typename Scalar>
SamplingMatrix<Scalar> sampling_matrix(const SampleDraw<Scalar>& draw) {
  const Index c = draw.count();
  if (c < 1) throw InvalidArgumentError("sampling_matrix: empty draw");
  SamplingMatrix<Scalar> s;
  s.n = draw.probs.size();
  s.indices = draw.indices;
  s.scales.resize(c);
  for (Index j = 0; j < c; ++j) {
    const Index t = draw.indices[static_cast<std::size_t>(j)];
    if (t < 0 || t >= s.n) throw InvalidArgumentError("sampling_matrix: index out of range");
    const Scalar pt = draw.probs(t);
    if (!(pt > Scalar(0))) {
      throw InvalidArgumentError("sampling_matrix: zero-probability column sampled");
    }
    s.scales(j) = Scalar(1) / std::sqrt(Scalar(c) * pt);
  }
  return s;
}

/// A * S formed column by column; never materializes the dense selector.
template <typename Derived>
Matrix<typename Derived::Scalar> apply_sampling(const Eigen::MatrixBase<Derived>& a,
                                                const SamplingMatrix<typename Derived::Scalar>& s) {
  using Scalar = typename Derived::Scalar;
  if (a.cols() != s.n) {
    throw DimensionMismatchError("apply_sampling: column count must match selector rows");
  }
  Matrix<Scalar> out(a.rows(), s.count());
  for (Index j = 0; j < s.count(); ++j) {
    out.col(j) = a.derived().col(s.indices[static_cast<std::size_t>(j)]) * s.scales(j);
  }
  return out;
}

/// Unscaled column selection A(:, indices).
template <typename Derived>
Matrix<typename Derived::Scalar> sampled_submatrix(const Eigen::MatrixBase<Derived>& a,
                                                   const std::vector<Index>& indices) {
  using Scalar = typename Derived::Scalar;
  Matrix<Scalar> out(a.rows(), static_cast<Index>(indices.size()));
  for (std::size_t j = 0; j < indices.size(); ++j) {
    if (indices[j] < 0 || indices[j] >= a.cols()) {
      throw InvalidArgumentError("sampled_submatrix: index out of range");
    }
    out.col(static_cast<Index>(j)) = a.derived().col(indices[j]);
  }
  return out;
}

template <typename Derived, typename Scalar>
Matrix<typename Derived::Scalar> sampled_submatrix(const Eigen::MatrixBase<Derived>& a,
                                                   const SampleDraw<Scalar>& draw) {
  return sampled_submatrix(a, draw.indices);
}

/// (AS)(AS)^T for a given draw, explicitly symmetrized. The estimate depends
/// only on the multiset of drawn indices.
template <typename Derived, typename Scalar>
Matrix<typename Derived::Scalar> gram_estimate(const Eigen::MatrixBase<Derived>& a,
                                               const SampleDraw<Scalar>& draw) {
  if (a.cols() != draw.probs.size()) {
    throw DimensionMismatchError("gram_estimate: column count must match distribution length");
  }
  Matrix<Scalar> as = apply_sampling(a, sampling_matrix(draw));
  Matrix<Scalar> x = as * as.transpose();
  Matrix<Scalar> sym = (x + x.transpose()) / Scalar(2);
  return sym;
}

template <typename Scalar>
struct GramApproximation {
  Matrix<Scalar> x;
  SampleDraw<Scalar> draw;
};

/// Draws c columns with replacement from p and returns the rescaled
/// outer-product estimate of A A^T together with the draw that produced it.
template <typename Derived, typename Scalar>
GramApproximation<Scalar> approximate_gram(const Eigen::MatrixBase<Derived>& a,
                                           const ProbabilityVector<Scalar>& p, Index c,
                                           RandomStream& stream) {
  if (a.cols() != p.probs.size()) {
    throw DimensionMismatchError("approximate_gram: column count must match distribution length");
  }
  GramApproximation<Scalar> out;
  out.draw = draw_with_replacement(p, c, stream);
  out.x = gram_estimate(a, out.draw);
  return out;
}

}  // namespace gramsample
