#pragma once

#include <stdexcept>
#include <string>

namespace satrep {

/// Inputs outside the physical domain of a model equation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The satellite is never simultaneously visible from both ground stations.
class VisibilityError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Werner parameter left [-1/3, 1] during the repeater recursion.
class UnphysicalStateError : public DomainError {
 public:
  using DomainError::DomainError;
};

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or unknown scenario configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace satrep
