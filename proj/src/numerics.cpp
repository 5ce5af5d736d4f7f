#include "irswpcn/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "irswpcn/errors.hpp"

namespace irswpcn::numerics {

double hermitian_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  if (m.size() == 0) return true;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return hermitian_defect(m) <= tol * scale;
}

EigDecomposition hermitian_eig(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) {
    throw ContractViolation("hermitian_eig: matrix is " + std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()) + ", expected square");
  }
  if (!is_hermitian(m)) {
    throw ContractViolation("hermitian_eig: input is not Hermitian (defect " +
                            std::to_string(hermitian_defect(m)) + ")");
  }
  if (m.size() == 0) return {};

  // Eigen reads the lower triangle only; averaging with the adjoint first
  // keeps both triangles' rounding noise out of the result.
  const ComplexMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    // Eigen's tridiagonal QL gives up after 30 sweeps per eigenvalue.
    const long budget = 30L * static_cast<long>(m.rows());
    throw NumericalError("hermitian_eig: QL iteration did not converge", budget);
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

std::pair<double, ComplexVector> principal_eigenpair(const ComplexMatrix& m) {
  const auto eig = hermitian_eig(m);
  const auto last = eig.eigenvalues.size() - 1;
  return {eig.eigenvalues(last), eig.eigenvectors.col(last)};
}

double lambda_min(const ComplexMatrix& m) { return hermitian_eig(m).eigenvalues(0); }

double lambda_max(const ComplexMatrix& m) {
  const auto ev = hermitian_eig(m).eigenvalues;
  return ev(ev.size() - 1);
}

ComplexMatrix psd_project(const ComplexMatrix& m) {
  const auto eig = hermitian_eig(m);
  if (eig.eigenvalues.size() == 0) return m;
  if (eig.eigenvalues(0) >= 0.0) return 0.5 * (m + m.adjoint());
  const RealVector clamped = eig.eigenvalues.cwiseMax(0.0);
  ComplexMatrix out = eig.eigenvectors * clamped.asDiagonal() * eig.eigenvectors.adjoint();
  return 0.5 * (out + out.adjoint());
}

ScalarOptimum maximize_concave_1d(const std::function<double(double)>& f, double lo, double hi,
                                  double tol) {
  if (!(tol > 0.0)) throw ArgumentError("maximize_concave_1d: tol must be positive");
  if (!(lo < hi)) throw ArgumentError("maximize_concave_1d: require lo < hi");

  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c);
  double fd = f(d);

  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }

  ScalarOptimum best{0.5 * (a + b), f(0.5 * (a + b))};
  for (const double x : {lo, hi}) {
    const double fx = f(x);
    if (fx > best.value && std::abs(x - best.x) <= 2.0 * tol + (hi - lo) * 1e-12) {
      best = {x, fx};
    }
  }
  return best;
}

Complex standard_complex_normal(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double re = normal(rng);
  const double im = normal(rng);
  return {re * M_SQRT1_2, im * M_SQRT1_2};
}

}  // namespace irswpcn::numerics
