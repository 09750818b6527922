#pragma once

#include <stdexcept>
#include <string>

namespace rwlab {

/// Raised when a numerical routine cannot reach its accuracy target.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a grid oracle would exceed its node budget.
class InfeasibleGrid : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rwlab
