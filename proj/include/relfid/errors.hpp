#pragma once

#include <stdexcept>
#include <string>

namespace relfid {

/// Raised for malformed input: bad dimensions, out-of-range parameters,
/// states that are not valid density matrices, malformed channel specs.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when a numerical procedure cannot produce a trustworthy result
/// (singular systems that survive perturbation, failed curvature checks).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace relfid
