#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ricb {

// Argument outside the mathematical domain of an operation, or a violated
// type invariant (e.g. delta outside (0,1)).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Root bracketing or iteration failed to converge.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The implicit equation has no root on the admissible side of its
// constraint (lambda >= 1+gamma or lambda <= 1-gamma).
class ConstraintError : public SolverError {
 public:
  using SolverError::SolverError;
};

// A combinatorial guard refused the request because the enumeration would
// be too large. `count` is the size that was computed.
class GuardRefusal : public std::runtime_error {
 public:
  GuardRefusal(const std::string& what, double count)
      : std::runtime_error(what), count_(count) {}
  double count() const noexcept { return count_; }

 private:
  double count_;
};

}  // namespace ricb
