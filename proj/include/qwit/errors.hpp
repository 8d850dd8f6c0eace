#pragma once

#include <stdexcept>
#include <string>

namespace qwit {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numeric parameter is out of range, non-finite, or infeasible.
class ParamError : public Error {
 public:
  using Error::Error;
};

// A matrix argument contains NaN or infinity.
class InvalidMatrixError : public Error {
 public:
  using Error::Error;
};

// A state failed its normalization / density-matrix invariants.
class NormalizationError : public Error {
 public:
  using Error::Error;
};

// A ClassicalModel breached its invariants (bad probabilities or f > g).
class ModelError : public Error {
 public:
  using Error::Error;
};

// An operation that needs a pure state received a mixed one.
class PureStateRequiredError : public Error {
 public:
  using Error::Error;
};

// noise_threshold was asked for a triple that never violates.
class NoThresholdError : public Error {
 public:
  using Error::Error;
};

// A document could not be parsed or failed schema validation.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace qwit
