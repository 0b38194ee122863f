#pragma once

#include <stdexcept>
#include <string>

namespace pandora {

// Input outside the mathematical domain of an operation (nonpositive ratio,
// empty dataset, zero sensitivity, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Inconsistent or malformed configuration: dimension mismatches, bad prior
// parameters, unknown metric names, unreadable files.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The operation is well-formed but deliberately not defined for this input.
class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace pandora
