#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <random>

#include <Eigen/Dense>

namespace irswpcn {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// The single random engine type. Every random draw in the library goes
/// through an instance passed in explicitly by the caller.
using Rng = std::mt19937_64;

namespace numerics {

struct EigDecomposition {
  RealVector eigenvalues;      // ascending
  ComplexMatrix eigenvectors;  // columns, unitary
};

/// Largest absolute deviation from Hermitian symmetry, |m - m^H|_max.
double hermitian_defect(const ComplexMatrix& m);

/// True when |m - m^H|_max <= tol * max(1, |m|_max).
bool is_hermitian(const ComplexMatrix& m, double tol = 1e-10);

/// Full spectral decomposition of a Hermitian matrix.
/// Throws ContractViolation for non-square or non-Hermitian input and
/// NumericalError if the QL iteration does not converge.
EigDecomposition hermitian_eig(const ComplexMatrix& m);

/// Largest eigenvalue and the matching unit eigenvector.
std::pair<double, ComplexVector> principal_eigenpair(const ComplexMatrix& m);

double lambda_min(const ComplexMatrix& m);
double lambda_max(const ComplexMatrix& m);

/// Frobenius-nearest PSD matrix: clamps negative eigenvalues to zero.
ComplexMatrix psd_project(const ComplexMatrix& m);

struct ScalarOptimum {
  double x = 0.0;
  double value = 0.0;
};

/// Golden-section maximization of a unimodal function on [lo, hi].
/// The returned abscissa is within `tol` of the maximizer; the bracket
/// endpoints are also compared so monotone functions return the boundary.
ScalarOptimum maximize_concave_1d(const std::function<double(double)>& f, double lo, double hi,
                                  double tol = 1e-9);

/// Circularly-symmetric complex Gaussian sample with unit variance.
Complex standard_complex_normal(Rng& rng);

}  // namespace numerics
}  // namespace irswpcn
