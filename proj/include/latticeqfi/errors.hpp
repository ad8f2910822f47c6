#pragma once

#include <stdexcept>
#include <string>

namespace latticeqfi {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Requested Fock space exceeds the configured dimension cap.
class SizingError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Eigensolver failure, non-unitary drift, or a finite-difference step that
/// cannot resolve the state.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed run configuration (unknown key, wrong type, invalid value).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace latticeqfi
