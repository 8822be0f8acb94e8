#pragma once

#include <stdexcept>
#include <string>

namespace pco {

/// An argument lies outside the domain on which an operation is defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A caller broke an operation's precondition (e.g. firing a node that is not at 2*pi).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The simulated trajectory violated a structural guarantee of the hybrid model.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative numerical procedure failed to converge.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pco
