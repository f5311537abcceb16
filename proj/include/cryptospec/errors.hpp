#pragma once

#include <stdexcept>
#include <string>

namespace cryptospec {

/// Invalid argument or precondition violation (non-finite input, out-of-range index, wrong parity).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The requested quantity collapses (e.g. turning points at E = 0).
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A closed form is not available for the requested parameters.
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical procedure failed: step underflow, escape during a flow, missing decay branch, ...
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two independent routes disagree (analytic vs numeric classification, monotonicity of a predicate).
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cryptospec
