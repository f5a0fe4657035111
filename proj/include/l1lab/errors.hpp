#pragma once

#include <stdexcept>
#include <string>

namespace l1lab {

/// A precondition on an argument was violated (mask out of range, p < 1, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The request is well formed but exceeds a fixed computational cap.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A combinatorial construction could not be carried out (e.g. reducible field polynomial).
class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace l1lab
