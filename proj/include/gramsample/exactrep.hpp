#pragma once

#include <algorithm>
#include <cmath>
#include <unordered_set>
#include <vector>

#include "gramsample/core.hpp"
#include "gramsample/matcore.hpp"
#include "gramsample/sampler.hpp"

namespace gramsample {

/// Weight matrix W for a reconstruction A1 W A1^T from selected columns A1.
/// Diagonal form stores the per-column weights only.
template <typename Scalar>
struct WeightMatrix {
  enum class Form { Diagonal, Full };

  Form form = Form::Diagonal;
  Vector<Scalar> diagonal;
  Matrix<Scalar> full;

  static WeightMatrix diagonal_form(Vector<Scalar> w) {
    WeightMatrix out;
    out.form = Form::Diagonal;
    out.diagonal = std::move(w);
    return out;
  }

  static WeightMatrix full_form(Matrix<Scalar> w) {
    WeightMatrix out;
    out.form = Form::Full;
    out.full = std::move(w);
    return out;
  }

  Index size() const {
    return form == Form::Diagonal ? diagonal.size() : full.rows();
  }

  Matrix<Scalar> dense() const {
    if (form == Form::Diagonal) return Matrix<Scalar>(diagonal.asDiagonal());
    return full;
  }
};

/// Moore-Penrose pseudoinverse truncated at the numerical rank.
template <typename Derived>
Matrix<typename Derived::Scalar> pseudo_inverse(
    const Eigen::MatrixBase<Derived>& a,
    typename Derived::Scalar rel_tol = typename Derived::Scalar(-1)) {
  using Scalar = typename Derived::Scalar;
  ThinSvd<Scalar> svd = thin_svd(a, rel_tol);
  return svd.v * svd.sigma.cwiseInverse().asDiagonal() * svd.u.transpose();
}

/// A(:, indices) * W * A(:, indices)^T, symmetrized.
template <typename Derived, typename Scalar>
Matrix<typename Derived::Scalar> reconstruct(const Eigen::MatrixBase<Derived>& a,
                                             const std::vector<Index>& indices,
                                             const WeightMatrix<Scalar>& w) {
  if (w.size() != static_cast<Index>(indices.size())) {
    throw DimensionMismatchError("reconstruct: weight size must match index count");
  }
  Matrix<Scalar> a1 = sampled_submatrix(a, indices);
  Matrix<Scalar> g = a1 * w.dense() * a1.transpose();
  Matrix<Scalar> sym = (g + g.transpose()) / Scalar(2);
  return sym;
}

/// Weight matrix minimizing ||A A^T - A1 W A1^T||_F over all W, where A1 is
/// the unscaled selection A(:, indices): pinv(A1) A A^T pinv(A1)^T.
template <typename Derived>
WeightMatrix<typename Derived::Scalar> optimal_weight_matrix(const Eigen::MatrixBase<Derived>& a,
                                                             const std::vector<Index>& indices) {
  using Scalar = typename Derived::Scalar;
  if (indices.empty()) throw InvalidArgumentError("optimal_weight_matrix: empty index list");
  Matrix<Scalar> a1 = sampled_submatrix(a, indices);
  Matrix<Scalar> pinv = pseudo_inverse(a1);
  Matrix<Scalar> g = gram(a);
  Matrix<Scalar> w = pinv * g * pinv.transpose();
  Matrix<Scalar> sym = (w + w.transpose()) / Scalar(2);
  return WeightMatrix<Scalar>::full_form(std::move(sym));
}

/// True when the columns sqrt(w_j) * V(indices[j], :)^T form a matrix with
/// orthonormal rows, i.e. the weighted selection reconstructs the Gram
/// product exactly. V is the n x k right singular factor; requires at least
/// k selected columns and non-negative weights.
template <typename Derived, typename Scalar>
bool exactness_check(const Eigen::MatrixBase<Derived>& v, const std::vector<Index>& indices,
                     const Vector<Scalar>& weights, Scalar tol = Scalar(1e-8)) {
  const Index k = v.cols();
  const Index c = static_cast<Index>(indices.size());
  if (weights.size() != c) {
    throw DimensionMismatchError("exactness_check: weight count must match index count");
  }
  if (c < k) {
    throw InvalidArgumentError("exactness_check: need at least as many columns as the rank");
  }
  if (!(tol >= Scalar(0))) throw InvalidArgumentError("exactness_check: negative tolerance");

  Matrix<Scalar> m(k, c);
  for (Index j = 0; j < c; ++j) {
    const Index t = indices[static_cast<std::size_t>(j)];
    if (t < 0 || t >= v.rows()) throw InvalidArgumentError("exactness_check: index out of range");
    if (weights(j) < Scalar(0)) throw InvalidArgumentError("exactness_check: negative weight");
    m.col(j) = std::sqrt(weights(j)) * v.derived().row(t).transpose();
  }
  Matrix<Scalar> gap = m * m.transpose() - Matrix<Scalar>::Identity(k, k);
  return gap.cwiseAbs().maxCoeff() <= tol;
}

template <typename Scalar>
struct SubsetWeights {
  Vector<Scalar> weights;
  bool valid = false;
};

/// Inverse-leverage weights for a selection of exactly k = cols(V) distinct
/// columns: w_j = 1 / ||V(indices[j], :)||^2. valid reports whether the
/// weighted selection reconstructs exactly.
template <typename Derived>
SubsetWeights<typename Derived::Scalar> subset_weights(
    const Eigen::MatrixBase<Derived>& v, const std::vector<Index>& indices,
    typename Derived::Scalar tol = typename Derived::Scalar(1e-8)) {
  using Scalar = typename Derived::Scalar;
  const Index k = v.cols();
  if (static_cast<Index>(indices.size()) != k) {
    throw InvalidArgumentError("subset_weights: need exactly as many indices as the rank");
  }
  std::unordered_set<Index> seen(indices.begin(), indices.end());
  if (static_cast<Index>(seen.size()) != k) {
    throw InvalidArgumentError("subset_weights: indices must be distinct");
  }

  SubsetWeights<Scalar> out;
  out.weights.resize(k);
  for (Index j = 0; j < k; ++j) {
    const Index t = indices[static_cast<std::size_t>(j)];
    if (t < 0 || t >= v.rows()) throw InvalidArgumentError("subset_weights: index out of range");
    const Scalar lev = v.derived().row(t).squaredNorm();
    if (!(lev > Scalar(0))) {
      throw ZeroLeverageError("subset_weights: selected column has zero leverage");
    }
    out.weights(j) = Scalar(1) / lev;
  }
  out.valid = exactness_check(v, indices, out.weights, tol);
  return out;
}

/// Exact-reconstruction weights for a rank-one matrix:
/// w_j = ||A||_F^2 / (c * ||A(:, indices[j])||^2). Any selection of nonzero
/// columns reconstructs A A^T exactly with these weights.
template <typename Derived>
Vector<typename Derived::Scalar> rank_one_weights(const Eigen::MatrixBase<Derived>& a,
                                                  const std::vector<Index>& indices) {
  using Scalar = typename Derived::Scalar;
  if (indices.empty()) throw InvalidArgumentError("rank_one_weights: empty index list");
  ThinSvd<Scalar> svd = thin_svd(a);
  if (svd.rank != 1) throw NotRankOneError("rank_one_weights: matrix is not numerically rank-one");

  const Scalar frob_sq = a.derived().squaredNorm();
  const Index c = static_cast<Index>(indices.size());
  Vector<Scalar> w(c);
  for (Index j = 0; j < c; ++j) {
    const Index t = indices[static_cast<std::size_t>(j)];
    if (t < 0 || t >= a.cols()) throw InvalidArgumentError("rank_one_weights: index out of range");
    const Scalar col_sq = a.derived().col(t).squaredNorm();
    if (!(col_sq > Scalar(0))) {
      throw ZeroLeverageError("rank_one_weights: selected column is zero");
    }
    w(j) = frob_sq / (Scalar(c) * col_sq);
  }
  return w;
}

}  // namespace gramsample
