#pragma once

#include <stdexcept>
#include <string>

namespace confmass {

/// Metric failed to factor as symmetric positive definite.
class DegenerateMetricError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Finite-difference stencil would leave the chart domain.
class StencilError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Point outside the chart domain.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller misuse: bad parameters, incompatible index types, malformed config.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace confmass
