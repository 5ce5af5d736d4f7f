#include "irswpcn/phase_vector.hpp"

#include <cmath>
#include <string>

#include "irswpcn/errors.hpp"

namespace irswpcn {

PhaseVector::PhaseVector(ComplexVector coefficients) : coefficients_(std::move(coefficients)) {
  for (Eigen::Index n = 0; n < coefficients_.size(); ++n) {
    const double mod = std::abs(coefficients_(n));
    if (!(std::abs(mod - 1.0) <= kModulusTol)) {
      throw ContractViolation("PhaseVector: entry " + std::to_string(n) + " has modulus " +
                              std::to_string(mod));
    }
  }
}

PhaseVector PhaseVector::from_phases(std::span<const double> phases) {
  ComplexVector v(static_cast<Eigen::Index>(phases.size()));
  for (std::size_t n = 0; n < phases.size(); ++n) v(static_cast<Eigen::Index>(n)) = std::polar(1.0, phases[n]);
  return PhaseVector(std::move(v));
}

PhaseVector PhaseVector::ones(int n) { return PhaseVector(ComplexVector::Ones(n)); }

PhaseVector PhaseVector::project(const ComplexVector& u) {
  ComplexVector v(u.size());
  for (Eigen::Index n = 0; n < u.size(); ++n) {
    const double mod = std::abs(u(n));
    v(n) = mod > 0.0 ? u(n) / mod : Complex(1.0, 0.0);
  }
  return PhaseVector(std::move(v));
}

ComplexVector PhaseVector::lifted() const {
  ComplexVector out(coefficients_.size() + 1);
  out.head(coefficients_.size()) = coefficients_;
  out(coefficients_.size()) = 1.0;
  return out;
}

std::vector<double> PhaseVector::phases() const {
  std::vector<double> out(static_cast<std::size_t>(coefficients_.size()));
  for (Eigen::Index n = 0; n < coefficients_.size(); ++n) out[static_cast<std::size_t>(n)] = std::arg(coefficients_(n));
  return out;
}

}  // namespace irswpcn
