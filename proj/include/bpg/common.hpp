#pragma once

#include <stdexcept>
#include <string>

namespace bpg {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Conforming dimensions were violated by the caller.
class DimensionError : public Error {
public:
  using Error::Error;
};

/// A factorization hit a non-positive pivot.
class NotPositiveDefiniteError : public Error {
public:
  NotPositiveDefiniteError(const std::string& what, int pivot)
      : Error(what), pivot_index(pivot) {}
  int pivot_index;
};

/// A block had lower numerical rank than required.
class RankError : public Error {
public:
  RankError(const std::string& what, int rank) : Error(what), detected_rank(rank) {}
  int detected_rank;
};

/// Malformed input file or configuration.
class ParseError : public Error {
public:
  ParseError(const std::string& what, long line) : Error(what), line_number(line) {}
  long line_number;
};

/// An iterative scheme failed to reach its tolerance.
class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& what, double achieved)
      : Error(what), achieved_residual(achieved) {}
  double achieved_residual;
};

/// Invalid parameter value.
class ParamError : public Error {
public:
  using Error::Error;
};

} // namespace bpg
