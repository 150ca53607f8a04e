#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "gramsample/core.hpp"

namespace gramsample {

/// Thin singular value decomposition truncated at the numerical rank:
/// u is m x k with orthonormal columns, sigma holds the k positive singular
/// values in non-increasing order, v is n x k with orthonormal columns.
template <typename Scalar>
struct ThinSvd {
  Matrix<Scalar> u;
  Vector<Scalar> sigma;
  Matrix<Scalar> v;
  Index rank = 0;
};

/// Scalar facts read off a thin SVD. leverage_scores has one entry per
/// column of the decomposed matrix (squared row norms of v); their sum is
/// the rank. coherence is the largest leverage score.
template <typename Scalar>
struct SpectralSummary {
  Scalar spectral_norm = 0;
  Scalar frobenius_norm = 0;
  Scalar stable_rank = 0;
  Index rank = 0;
  Vector<Scalar> leverage_scores;
  Scalar coherence = 0;
};

/// A * A^T with the result explicitly symmetrized.
template <typename Derived>
Matrix<typename Derived::Scalar> gram(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  Matrix<Scalar> m = a.derived();
  if (!m.allFinite()) throw InvalidArgumentError("gram: matrix has non-finite entries");
  Matrix<Scalar> g = m * m.transpose();
  Matrix<Scalar> sym = (g + g.transpose()) / Scalar(2);
  return sym;
}

/// Thin SVD truncated at the numerical rank: keeps singular values
/// sigma_i > rel_tol * sigma_1. A negative rel_tol selects the default
/// threshold max(rows, cols) * machine-epsilon.
template <typename Derived>
ThinSvd<typename Derived::Scalar> thin_svd(
    const Eigen::MatrixBase<Derived>& a,
    typename Derived::Scalar rel_tol = typename Derived::Scalar(-1)) {
  using Scalar = typename Derived::Scalar;
  Matrix<Scalar> m = a.derived();
  if (!m.allFinite()) throw InvalidArgumentError("thin_svd: matrix has non-finite entries");
  if (m.norm() == Scalar(0)) throw ZeroMatrixError("thin_svd: zero matrix");
  if (rel_tol < Scalar(0)) {
    rel_tol = Scalar(std::max(m.rows(), m.cols())) * std::numeric_limits<Scalar>::epsilon();
  }
  if (rel_tol >= Scalar(1)) {
    throw InvalidArgumentError("thin_svd: relative tolerance must be below 1");
  }

  Eigen::JacobiSVD<Matrix<Scalar>> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) throw NoConvergenceError("thin_svd: SVD did not converge");

  const Vector<Scalar>& sv = svd.singularValues();
  const Scalar cut = rel_tol * sv(0);
  Index k = 0;
  while (k < sv.size() && sv(k) > cut) ++k;

  ThinSvd<Scalar> out;
  out.u = svd.matrixU().leftCols(k);
  out.sigma = sv.head(k);
  out.v = svd.matrixV().leftCols(k);
  out.rank = k;
  return out;
}

template <typename Scalar>
SpectralSummary<Scalar> spectral_summary(const ThinSvd<Scalar>& svd) {
  SpectralSummary<Scalar> s;
  s.spectral_norm = svd.sigma(0);
  s.frobenius_norm = svd.sigma.norm();
  s.stable_rank = svd.sigma.squaredNorm() / (svd.sigma(0) * svd.sigma(0));
  s.rank = svd.rank;
  s.leverage_scores = svd.v.rowwise().squaredNorm();
  s.coherence = s.leverage_scores.maxCoeff();
  return s;
}

template <typename Derived>
SpectralSummary<typename Derived::Scalar> spectral_summary(const Eigen::MatrixBase<Derived>& a) {
  return spectral_summary(thin_svd(a));
}

/// Largest absolute eigenvalue of the symmetrized input, i.e. the spectral
/// norm of (M + M^T)/2.
template <typename Derived>
typename Derived::Scalar spectral_norm_sym(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  if (m.rows() != m.cols()) {
    throw DimensionMismatchError("spectral_norm_sym: matrix must be square");
  }
  Matrix<Scalar> sym = (m.derived() + m.derived().transpose()) / Scalar(2);
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> es(sym, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NoConvergenceError("spectral_norm_sym: eigensolver did not converge");
  }
  const Vector<Scalar>& ev = es.eigenvalues();
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

/// ||X - G||_2 / ||G||_2 for symmetric X and G of equal size. The difference
/// is symmetrized before the norm is taken.
template <typename DerivedX, typename DerivedG>
typename DerivedX::Scalar relative_error_2norm(const Eigen::MatrixBase<DerivedX>& x,
                                               const Eigen::MatrixBase<DerivedG>& g) {
  using Scalar = typename DerivedX::Scalar;
  if (x.rows() != x.cols() || g.rows() != g.cols() || x.rows() != g.rows()) {
    throw DimensionMismatchError("relative_error_2norm: matrices must be square and equal size");
  }
  if (!x.derived().allFinite() || !g.derived().allFinite()) {
    throw InvalidArgumentError("relative_error_2norm: matrix has non-finite entries");
  }
  const Scalar denom = spectral_norm_sym(g);
  if (denom == Scalar(0)) throw ZeroMatrixError("relative_error_2norm: reference matrix is zero");
  Matrix<Scalar> diff = x.derived() - g.derived();
  return spectral_norm_sym(diff) / denom;
}

}  // namespace gramsample
