#pragma once

#include <stdexcept>
#include <string>

namespace qsre {

/// A computation would exceed a configured size cap (Pauli enumeration,
/// dense oracles). Raised instead of truncating silently.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical invariant violated (eigensolver failure, RDM not positive,
/// norm drift out of bounds).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Krylov propagation could not reach the requested tolerance.
class ConvergenceError : public NumericError {
 public:
  ConvergenceError(const std::string& what, double achieved)
      : NumericError(what), achieved_estimate_(achieved) {}

  double achieved_estimate() const noexcept { return achieved_estimate_; }

 private:
  double achieved_estimate_;
};

/// Invalid or inconsistent experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qsre
