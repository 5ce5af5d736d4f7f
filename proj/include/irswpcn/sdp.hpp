#pragma once

#include <optional>

#include "irswpcn/errors.hpp"
#include "irswpcn/psd_variable.hpp"

namespace irswpcn {

/// Result of  max Tr(C V)  s.t.  diag(V) = 1, V >= 0.
///
/// `dual` is a feasible point of the dual  min sum(y)  s.t.  Diag(y) - C >= 0,
/// so dualValue certifies primalValue <= optimum <= dualValue.
struct SdpResult {
  PsdVariable V;
  double primalValue = 0.0;
  double dualValue = 0.0;
  double dualityGap = 0.0;
  int iterations = 0;
  RealVector dual;
};

/// Iteration budget exhausted; carries the best certified iterate.
class SdpError : public NumericalError {
 public:
  SdpError(const std::string& what, SdpResult best)
      : NumericalError(what, best.iterations), best_(std::move(best)) {}

  const SdpResult& best() const noexcept { return best_; }

 private:
  SdpResult best_;
};

struct SdpOptions {
  double tol = 1e-6;  // absolute, on the certified duality gap
  int maxIters = 50000;
  int checkEvery = 10;
  std::optional<ComplexMatrix> warmStart;  // unit-diagonal PSD starting point
  int lowRankSweeps = 2000;  // coordinate-ascent presolve budget; 0 disables it
};

/// Smallest dual objective reachable from `y` by a uniform shift:
/// y + max(0, -lambda_min(Diag(y) - C)) * 1. Returns the shifted vector.
RealVector feasible_dual(const ComplexMatrix& c, const RealVector& y);

SdpResult solve_unit_diag_sdp(const ComplexMatrix& c, const SdpOptions& options);
SdpResult solve_unit_diag_sdp(const ComplexMatrix& c, double tol = 1e-6, int maxIters = 50000);

}  // namespace irswpcn
