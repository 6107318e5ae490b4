#pragma once

#include <stdexcept>
#include <string>

namespace cch {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Internal inconsistency between two numerical routes that should agree.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// An iterative solver failed to converge.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GridMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace cch
