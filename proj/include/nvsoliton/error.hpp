#pragma once

#include <stdexcept>
#include <string>

namespace nvsoliton {

/// Rejected input: out-of-range parameters, malformed files, off-shell momenta.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The numerics could not produce a trustworthy answer.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Linear system too ill-conditioned (dense path) or iterative solve stalled.
class SingularSystem : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

/// Time integration blew up.
class Instability : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

}  // namespace nvsoliton
