#pragma once

#include <span>
#include <vector>

#include "irswpcn/numerics.hpp"

namespace irswpcn {

/// IRS reflection coefficients: N complex entries of unit modulus.
/// N = 0 is the no-IRS system.
class PhaseVector {
 public:
  static constexpr double kModulusTol = 1e-10;

  PhaseVector() = default;

  /// Throws ContractViolation unless every entry has |v_n| = 1 within kModulusTol.
  explicit PhaseVector(ComplexVector coefficients);

  static PhaseVector from_phases(std::span<const double> phases);
  static PhaseVector ones(int n);

  /// Entry-wise e^{j arg(u_n)}; entries with |u_n| = 0 map to 1.
  static PhaseVector project(const ComplexVector& u);

  int size() const noexcept { return static_cast<int>(coefficients_.size()); }
  const ComplexVector& coefficients() const noexcept { return coefficients_; }
  Complex operator[](int n) const { return coefficients_(n); }

  /// [v; 1], the (N+1)-vector used by the lifted formulations.
  ComplexVector lifted() const;

  std::vector<double> phases() const;

 private:
  ComplexVector coefficients_;
};

}  // namespace irswpcn
