#pragma once

#include <stdexcept>
#include <string>

namespace oddity {

/// Input outside the mathematical domain of an operation (non-canonical
/// sector, unsupported beta, anisotropy out of range).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Violated caller contract, e.g. a vector whose length does not match the
/// sector dimension.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A basis or an enumeration would exceed the configured size cap.
class SizingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The iterative eigensolver stopped before reaching its tolerance.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Least-squares design matrix without full column rank.
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical invariant that must hold on every result did not.
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace oddity
