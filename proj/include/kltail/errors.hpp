#pragma once

#include <stdexcept>
#include <string>

namespace kltail {

// Base for every error raised by the library. The CLI maps subclasses to
// exit codes, so new failure modes should derive from one of these.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Vectors or samples whose shapes do not agree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Too few observations (or exceedances) for the requested computation.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

// A marginal CDF returned 1, so the Pareto transform divides by zero.
class DegenerateMarginError : public Error {
 public:
  DegenerateMarginError(std::size_t row, std::size_t coordinate)
      : Error("marginal cdf evaluates to 1 at row " + std::to_string(row) +
              ", coordinate " + std::to_string(coordinate)),
        row_(row),
        coordinate_(coordinate) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t coordinate() const noexcept { return coordinate_; }

 private:
  std::size_t row_;
  std::size_t coordinate_;
};

// Iterative numerical procedure failed to converge.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Malformed input file.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Invalid test or experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace kltail
