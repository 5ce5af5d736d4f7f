#include "irswpcn/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

namespace irswpcn {

namespace {

struct Certificate {
  ComplexMatrix primal;
  double primalValue = 0.0;
  RealVector dual;
  double dualValue = 0.0;
};

// Rescale a PSD matrix to unit diagonal: D^{-1/2} X D^{-1/2}. A vanishing
// diagonal entry means the row is numerically zero; it becomes e_n e_n^T.
ComplexMatrix unit_diagonal(const ComplexMatrix& x) {
  const auto d = x.rows();
  RealVector scale(d);
  for (Eigen::Index n = 0; n < d; ++n) {
    const double xn = x(n, n).real();
    scale(n) = xn > 1e-300 ? 1.0 / std::sqrt(xn) : 0.0;
  }
  ComplexMatrix out = scale.asDiagonal() * x * scale.asDiagonal();
  out = 0.5 * (out + out.adjoint());
  out.diagonal().setOnes();
  return out;
}

double trace_product(const ComplexMatrix& c, const ComplexMatrix& v) {
  return v.cwiseProduct(c.conjugate()).sum().real();
}

double min_eig(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

Certificate certify(const ComplexMatrix& c, const ComplexMatrix& x, const RealVector& admmDual) {
  Certificate cert;
  cert.primal = unit_diagonal(x);
  cert.primalValue = trace_product(c, cert.primal);

  // Two dual candidates: the ADMM multiplier, and the complementary-slackness
  // estimate y_n = Re (C V)_nn. Each is shifted into the dual cone.
  const ComplexMatrix cv = c * cert.primal;
  const RealVector slack = cv.diagonal().real();
  cert.dual = feasible_dual(c, admmDual);
  cert.dualValue = cert.dual.sum();
  const RealVector alt = feasible_dual(c, slack);
  if (alt.sum() < cert.dualValue) {
    cert.dual = alt;
    cert.dualValue = alt.sum();
  }
  return cert;
}

// Block coordinate ascent on the factorization V = W^H W with unit columns
// (W is p x d, p ~ sqrt(2d)): column i moves to the normalized gradient
// g_i = sum_{j != i} C_ji w_j, which never decreases Tr(CV).
ComplexMatrix low_rank_ascent(const ComplexMatrix& c, const std::optional<ComplexMatrix>& start, int maxSweeps) {
  const auto d = c.rows();
  const auto p = std::min<Eigen::Index>(d, static_cast<Eigen::Index>(std::ceil(std::sqrt(2.0 * static_cast<double>(d)))) + 1);

  Rng rng(0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(d));
  ComplexMatrix w(p, d);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) w(i, j) = 1e-3 * numerics::standard_complex_normal(rng);
  }
  if (start) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (*start + start->adjoint()));
    for (Eigen::Index r = 0; r < p; ++r) {
      const Eigen::Index col = d - 1 - r;
      const double lam = std::max(0.0, es.eigenvalues()(col));
      w.row(r) += std::sqrt(lam) * es.eigenvectors().col(col).adjoint();
    }
  } else {
    w *= 1e3;
  }
  for (Eigen::Index j = 0; j < d; ++j) w.col(j).normalize();

  ComplexMatrix g = w * c;  // g.col(i) = sum_j w_j C_ji
  double previous = -std::numeric_limits<double>::infinity();
  for (int sweep = 0; sweep < maxSweeps; ++sweep) {
    for (Eigen::Index i = 0; i < d; ++i) {
      const ComplexVector grad = g.col(i) - w.col(i) * c(i, i);
      const double norm = grad.norm();
      if (norm == 0.0) continue;
      const ComplexVector next = grad / norm;
      g.noalias() += (next - w.col(i)) * c.row(i);
      w.col(i) = next;
    }
    const double value = (w.adjoint() * w).cwiseProduct(c.conjugate()).sum().real();
    if (value - previous <= 1e-14 * std::abs(value)) break;
    previous = value;
  }
  return w.adjoint() * w;
}

}  // namespace

RealVector feasible_dual(const ComplexMatrix& c, const RealVector& y) {
  ComplexMatrix slack = -c;
  slack.diagonal() += y.cast<Complex>();
  const double shift = std::max(0.0, -min_eig(0.5 * (slack + slack.adjoint())));
  // A hair above the exact shift so the certificate survives rounding.
  const double pad = shift > 0.0 ? shift * (1.0 + 1e-12) + 1e-15 * std::max(1.0, c.cwiseAbs().maxCoeff()) : 0.0;
  return y.array() + pad;
}

SdpResult solve_unit_diag_sdp(const ComplexMatrix& c, double tol, int maxIters) {
  SdpOptions options;
  options.tol = tol;
  options.maxIters = maxIters;
  return solve_unit_diag_sdp(c, options);
}

SdpResult solve_unit_diag_sdp(const ComplexMatrix& c, const SdpOptions& options) {
  if (c.rows() != c.cols() || c.rows() == 0) throw ArgumentError("solve_unit_diag_sdp: C must be square, non-empty");
  if (!numerics::is_hermitian(c)) throw ContractViolation("solve_unit_diag_sdp: C is not Hermitian");
  if (!(options.tol > 0.0)) throw ArgumentError("solve_unit_diag_sdp: tol must be positive");
  if (options.maxIters < 1) throw ArgumentError("solve_unit_diag_sdp: maxIters must be >= 1");

  const auto d = c.rows();
  const ComplexMatrix ch = 0.5 * (c + c.adjoint());
  const double scale = ch.norm();

  if (scale == 0.0) {
    SdpResult trivial;
    trivial.V = PsdVariable(ComplexMatrix::Identity(d, d));
    trivial.dual = RealVector::Zero(d);
    return trivial;
  }

  // Dual ADMM on the normalized problem  min <B, X>, diag(X) = 1, X >= 0
  // with B = -C / |C|_F. Dual: max 1^T y  s.t.  Diag(y) + S = B, S >= 0.
  const ComplexMatrix b = -ch / scale;

  std::optional<ComplexMatrix> start = options.warmStart;
  if (options.lowRankSweeps > 0) start = low_rank_ascent(ch, options.warmStart, options.lowRankSweeps);

  ComplexMatrix x = start ? unit_diagonal(*start) : ComplexMatrix::Identity(d, d);
  ComplexMatrix s = ComplexMatrix::Zero(d, d);
  RealVector y = RealVector::Zero(d);
  if (start) {
    // Dual guess from complementary slackness, S the matching PSD part.
    y = -(ch * x).diagonal().real() / scale;
    ComplexMatrix v = b;
    v.diagonal() -= y.cast<Complex>();
    s = numerics::psd_project(v);
  }

  double mu = 1.0 / static_cast<double>(d);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es;

  SdpResult best;
  best.dualityGap = std::numeric_limits<double>::infinity();
  const auto check = [&](int it, const RealVector& admmDual) {
    auto cert = certify(ch, x, admmDual);
    const double gap = cert.dualValue - cert.primalValue;
    if (gap < best.dualityGap) {
      best.V = PsdVariable(std::move(cert.primal));
      best.primalValue = cert.primalValue;
      best.dualValue = cert.dualValue;
      best.dualityGap = gap;
      best.dual = std::move(cert.dual);
    }
    best.iterations = it;
    return best.dualityGap <= options.tol;
  };
  if (start && check(0, -y * scale)) return best;

  double primalRes = 0.0;
  double dualRes = 0.0;
  int balance = 0;

  for (int it = 1; it <= options.maxIters; ++it) {
    // y = mu (1 - diag X) + diag(B - S)
    y = mu * (RealVector::Ones(d) - x.diagonal().real()) + (b - s).diagonal().real();

    ComplexMatrix v = b - mu * x;
    v.diagonal() -= y.cast<Complex>();
    v = 0.5 * (v + v.adjoint());
    es.compute(v);
    const RealVector& lam = es.eigenvalues();
    const ComplexMatrix& u = es.eigenvectors();
    const RealVector pos = lam.cwiseMax(0.0);
    const RealVector neg = (-lam).cwiseMax(0.0);
    const ComplexMatrix sNew = u * pos.asDiagonal() * u.adjoint();
    const ComplexMatrix xNew = (u * neg.asDiagonal() * u.adjoint()) / mu;

    dualRes = mu * (xNew - x).norm();
    primalRes = (xNew.diagonal().real() - RealVector::Ones(d)).norm();
    s = sNew;
    x = xNew;

    // Residual balancing on the penalty parameter.
    if (primalRes > 4.0 * dualRes) {
      balance = std::max(balance, 0) + 1;
    } else if (dualRes > 4.0 * primalRes) {
      balance = std::min(balance, 0) - 1;
    } else {
      balance = 0;
    }
    if (balance >= 5) {
      mu *= 1.6;
      balance = 0;
    } else if (balance <= -5) {
      mu /= 1.6;
      balance = 0;
    }

    if (it % options.checkEvery == 0 || it == options.maxIters) {
      if (check(it, -y * scale)) return best;
    }
  }
  throw SdpError("solve_unit_diag_sdp: gap " + std::to_string(best.dualityGap) + " after " +
                     std::to_string(options.maxIters) + " iterations",
                 std::move(best));
}

}  // namespace irswpcn
