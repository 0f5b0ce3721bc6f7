#pragma once

#include <stdexcept>
#include <string>

namespace pinning {

/// Bad numeric parameter passed to an operation (e.g. lambda outside (0, lambda0)).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Query outside the range an object was built for.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Input outside the mathematical domain of an operation (zero field, nonpositive kernel, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Structurally invalid object, e.g. a path with a non-lazy step.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Work budget exceeded (brute-force enumeration).
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Operation refused because the potential violates the standing conditions.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Two objects that must share an index set do not.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace pinning
