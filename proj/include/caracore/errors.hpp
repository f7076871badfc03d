#pragma once

#include <stdexcept>
#include <string>

namespace caracore {

/// Base class of all library-specific errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input weights deviate from sum one beyond the tolerated drift.
class NotNormalized : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A cluster-count parameter (k, k1 or k2) is outside its valid range.
class InvalidK : public Error {
 public:
  using Error::Error;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

class FoldTooSmall : public Error {
 public:
  using Error::Error;
};

class RankDeficient : public Error {
 public:
  using Error::Error;
};

class Singular : public Error {
 public:
  using Error::Error;
};

class NonFinite : public Error {
 public:
  using Error::Error;
};

/// Every nullspace candidate degenerated to zero; signals an internal fault,
/// not a data error.
class DegenerateNullspace : public Error {
 public:
  using Error::Error;
};

class MissingColumn : public Error {
 public:
  using Error::Error;
};

/// Iterative solver hit its sweep budget; carries the final change gap.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, long iterations, double last_gap)
      : Error(what), iterations(iterations), last_gap(last_gap) {}

  long iterations;
  double last_gap;
};

/// CSV cell that could not be parsed; `line` is 1-based, `column` is the
/// 0-based column index of the offending cell.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, long long line, long long column)
      : Error(what), line(line), column(column) {}

  long long line;
  long long column;
};

}  // namespace caracore
