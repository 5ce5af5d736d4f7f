#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace irswpcn {

/// Bad argument values (negative tolerances, wrong lengths, invalid parameters).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A precondition on a value's structure was violated (non-Hermitian input,
/// non-unit-modulus phase vector, ...).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// An iterative routine failed to converge.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, long iterations)
      : std::runtime_error(what), iterations_(iterations) {}

  long iterations() const noexcept { return iterations_; }

 private:
  long iterations_;
};

/// tau1 = 0 with tau0 > 0: no finite transmit power satisfies energy causality.
class DegenerateAllocation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Exhaustive enumeration refused because it would exceed the configured budget.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, std::uint64_t required, std::uint64_t budget)
      : std::runtime_error(what), required_(required), budget_(budget) {}

  std::uint64_t required() const noexcept { return required_; }
  std::uint64_t budget() const noexcept { return budget_; }

 private:
  std::uint64_t required_;
  std::uint64_t budget_;
};

}  // namespace irswpcn
