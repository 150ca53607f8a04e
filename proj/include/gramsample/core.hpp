#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace gramsample {

using Index = Eigen::Index;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ZeroMatrixError : public Error {
public:
  using Error::Error;
};

class NoConvergenceError : public Error {
public:
  using Error::Error;
};

class DimensionMismatchError : public Error {
public:
  using Error::Error;
};

class InvalidArgumentError : public Error {
public:
  using Error::Error;
};

class ZeroLeverageError : public Error {
public:
  using Error::Error;
};

class NotRankOneError : public Error {
public:
  using Error::Error;
};

class UnsupportedFieldError : public Error {
public:
  using Error::Error;
};

class ParseError : public Error {
public:
  ParseError(const std::string& message, std::size_t line)
      : Error(message + " (line " + std::to_string(line) + ")"), line_(line) {}

  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

}  // namespace gramsample
