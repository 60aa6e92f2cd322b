#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace markov {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Index or size mismatch between operands.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A stated precondition was violated by the caller.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Chain structure rules out the requested computation
// (e.g. more than one closed communicating class).
class StructureError : public Error {
 public:
  using Error::Error;
};

// Degenerate input: an operation has no meaningful result for this row/state.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

// Iterative method stopped without meeting its tolerance. Carries the last
// iterate (dense, indexed by state) and the last observed gap.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> last_iterate,
                   double last_gap)
      : Error(what),
        last_iterate(std::move(last_iterate)),
        last_gap(last_gap) {}

  std::vector<double> last_iterate;
  double last_gap = 0.0;
};

// An internal consistency check failed; signals a bug or corrupted input
// rather than a user error.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

// Linear system is singular or nearly so; the minimal solution may be
// infinite or non-unique.
class IllPosedError : public Error {
 public:
  using Error::Error;
};

// 0/0 situation that the caller must disambiguate.
class IndeterminateError : public Error {
 public:
  using Error::Error;
};

// Malformed file or stream.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Invalid experiment configuration (CLI exit code 1).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace markov
