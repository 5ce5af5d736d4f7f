#include "irswpcn/psd_variable.hpp"

#include <cmath>
#include <string>

#include "irswpcn/errors.hpp"

namespace irswpcn {

PsdVariable::PsdVariable(ComplexMatrix m) {
  if (!numerics::is_hermitian(m)) throw ContractViolation("PsdVariable: matrix is not Hermitian");
  for (Eigen::Index n = 0; n < m.rows(); ++n) {
    if (std::abs(m(n, n) - 1.0) > kDiagonalTol) {
      throw ContractViolation("PsdVariable: diagonal entry " + std::to_string(n) + " is not 1");
    }
  }
  matrix_ = 0.5 * (m + m.adjoint());
  matrix_.diagonal().setOnes();
  if (matrix_.size() > 0) {
    const double lmin = numerics::lambda_min(matrix_);
    if (lmin < -kPsdTol) {
      throw ContractViolation("PsdVariable: minimum eigenvalue " + std::to_string(lmin) + " below tolerance");
    }
  }
}

PsdVariable PsdVariable::rank_one(const ComplexVector& u) { return PsdVariable(u * u.adjoint()); }

double PsdVariable::rank_residual() const {
  if (matrix_.size() == 0) return 0.0;
  return matrix_.trace().real() - numerics::lambda_max(matrix_);
}

double PsdVariable::trace_product(const ComplexMatrix& q) const {
  // Tr(VQ) = sum_ij V_ij Q_ji; for Hermitian Q this is sum_ij V_ij conj(Q_ij).
  return (matrix_.cwiseProduct(q.conjugate())).sum().real();
}

}  // namespace irswpcn
