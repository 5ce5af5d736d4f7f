#pragma once

#include "irswpcn/numerics.hpp"

namespace irswpcn {

/// Hermitian PSD matrix with unit diagonal: the lifted phase variable
/// V = [v;1][v;1]^H with the rank-one requirement dropped.
class PsdVariable {
 public:
  static constexpr double kDiagonalTol = 1e-8;
  static constexpr double kPsdTol = 1e-8;

  PsdVariable() = default;

  /// Validates Hermitian symmetry, the unit diagonal and PSD-ness; throws
  /// ContractViolation otherwise. The stored matrix is re-symmetrized and
  /// its diagonal set to exactly 1.
  explicit PsdVariable(ComplexMatrix m);

  /// Rank-one lift u u^H of a vector whose entries have unit modulus.
  static PsdVariable rank_one(const ComplexVector& u);

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  int dim() const noexcept { return static_cast<int>(matrix_.rows()); }

  /// Tr(V) - lambda_max(V); zero iff V has rank one.
  double rank_residual() const;

  /// Re Tr(V Q) for Hermitian Q.
  double trace_product(const ComplexMatrix& q) const;

 private:
  ComplexMatrix matrix_;
};

}  // namespace irswpcn
