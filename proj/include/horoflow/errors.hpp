#pragma once

#include <stdexcept>
#include <string>

namespace horoflow {

// Argument lies outside the region where an operation is defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A standing geometric hypothesis failed (flow breakdown, margin lost, ...).
class HypothesisViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Step collapse, non-convergence, or a verified bound broken by more than
// the numerical tolerance.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An internal identity that must hold on the chosen grid did not.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace horoflow
