#pragma once

#include <vector>

#include "gramsample/core.hpp"
#include "gramsample/random.hpp"

namespace gramsample {

template <typename Scalar = double>
Matrix<Scalar> gaussian_matrix(Index rows, Index cols, RandomStream& stream) {
  if (rows < 1 || cols < 1) throw InvalidArgumentError("gaussian_matrix: empty shape");
  Matrix<Scalar> g(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) g(i, j) = static_cast<Scalar>(stream.next_gaussian());
  }
  return g;
}

/// rows x cols matrix with orthonormal columns (cols <= rows), the thin Q
/// factor of a Gaussian matrix.
template <typename Scalar = double>
Matrix<Scalar> random_orthonormal(Index rows, Index cols, RandomStream& stream) {
  if (cols > rows) {
    throw InvalidArgumentError("random_orthonormal: need at least as many rows as columns");
  }
  Matrix<Scalar> g = gaussian_matrix<Scalar>(rows, cols, stream);
  Eigen::HouseholderQR<Matrix<Scalar>> qr(g);
  return qr.householderQ() * Matrix<Scalar>::Identity(rows, cols);
}

/// Random rows x cols matrix with the prescribed singular values: U S V^T
/// with Gaussian-derived orthonormal factors. The spectrum must be positive
/// at its head, non-negative, non-increasing, and no longer than
/// min(rows, cols).
template <typename Scalar = double>
Matrix<Scalar> synth_matrix(Index rows, Index cols, const std::vector<Scalar>& spectrum,
                            std::uint64_t seed) {
  if (rows < 1 || cols < 1) throw InvalidArgumentError("synth_matrix: empty shape");
  const Index k = static_cast<Index>(spectrum.size());
  if (k < 1 || k > std::min(rows, cols)) {
    throw InvalidArgumentError("synth_matrix: spectrum length must lie in [1, min(rows, cols)]");
  }
  if (!(spectrum.front() > Scalar(0))) {
    throw InvalidArgumentError("synth_matrix: leading singular value must be positive");
  }
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    if (spectrum[i] < Scalar(0)) {
      throw InvalidArgumentError("synth_matrix: singular values must be non-negative");
    }
    if (i > 0 && spectrum[i] > spectrum[i - 1]) {
      throw InvalidArgumentError("synth_matrix: singular values must be non-increasing");
    }
  }

  RandomStream left(seed, 0);
  RandomStream right(seed, 1);
  Matrix<Scalar> u = random_orthonormal<Scalar>(rows, k, left);
  Matrix<Scalar> v = random_orthonormal<Scalar>(cols, k, right);
  Vector<Scalar> s = Eigen::Map<const Vector<Scalar>>(spectrum.data(), k);
  return u * s.asDiagonal() * v.transpose();
}

}  // namespace gramsample
