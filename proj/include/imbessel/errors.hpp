#pragma once

#include <stdexcept>
#include <string>

namespace imbessel {

// Argument outside the mathematical domain (x <= 0, pole of Gamma, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The requested accuracy cannot be delivered: either the truncation bound
// needs more than the term cap, or floating-point rounding alone exceeds it.
class ToleranceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace imbessel
