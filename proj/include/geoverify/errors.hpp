#pragma once

#include <stdexcept>
#include <string>

namespace geoverify {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text or metric-spec document.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Evaluation outside a function's domain, or an unbound parameter.
class EvalError : public Error {
 public:
  using Error::Error;
};

class DegenerateMetricError : public Error {
 public:
  using Error::Error;
};

/// A constructor or operation was called with inputs violating its contract.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A sampled series does not have the shape a blow-up model requires.
class ModelMismatchError : public Error {
 public:
  using Error::Error;
};

}  // namespace geoverify
