#pragma once

#include <iosfwd>
#include <string>

#include "gramsample/core.hpp"

namespace gramsample {

/// MatrixMarket reader: coordinate and array formats, real or integer field,
/// general or symmetric storage (symmetric input is expanded). Complex,
/// pattern, and skew storage are rejected. Parse failures carry the
/// offending line number.
Matrix<double> read_matrix_market(std::istream& in);
Matrix<double> read_matrix_market(const std::string& path);

/// Dense CSV reader: one row per line, comma-separated finite reals, every
/// row the same length.
Matrix<double> read_dense_csv(std::istream& in);
Matrix<double> read_dense_csv(const std::string& path);

void write_dense_csv(const Matrix<double>& a, std::ostream& out);
void write_dense_csv(const Matrix<double>& a, const std::string& path);

/// Loads a matrix from disk, picking the format from the extension
/// (.mtx/.mm vs .csv) and falling back to banner sniffing otherwise.
Matrix<double> load_matrix(const std::string& path);

}  // namespace gramsample
