#include "irswpcn/ao_optimizer.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "irswpcn/errors.hpp"

namespace irswpcn {

std::string_view to_string(InitStrategy s) {
  switch (s) {
    case InitStrategy::alignStrongestUser: return "alignStrongestUser";
    case InitStrategy::randomPhases: return "randomPhases";
    case InitStrategy::allZero: return "allZero";
  }
  return "unknown";
}

InitStrategy parse_init_strategy(std::string_view name) {
  for (const auto s : {InitStrategy::alignStrongestUser, InitStrategy::randomPhases, InitStrategy::allZero}) {
    if (to_string(s) == name) return s;
  }
  throw ArgumentError("unknown init strategy '" + std::string(name) + "'");
}

void AoConfig::validate() const {
  if (maxOuterIters < 1) throw ArgumentError("AoConfig: maxOuterIters must be >= 1");
  if (!(objectiveTol > 0.0)) throw ArgumentError("AoConfig: objectiveTol must be > 0");
  if (scaInnerIters < 1) throw ArgumentError("AoConfig: scaInnerIters must be >= 1");
  if (randomRestarts < 0) throw ArgumentError("AoConfig: randomRestarts must be >= 0");
}

std::vector<double> sca_weights(const TimeAllocation& time, const SystemParams& params) {
  std::vector<double> alphas(params.efficiency.size(), 0.0);
  if (time.tau0 <= 0.0 || time.tau1 <= 0.0) return alphas;
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    alphas[k] = time.tau0 * params.hapPower * params.efficiency[k] / (time.tau1 * params.noisePower);
  }
  return alphas;
}

double weighted_quartic_objective(const ChannelRealization& real, std::span<const double> alphas,
                                  const PhaseVector& v) {
  double total = 0.0;
  for (int k = 0; k < real.num_devices(); ++k) {
    const double gain = composite_gain(real, k, v);
    total += alphas[static_cast<std::size_t>(k)] * gain * gain;
  }
  return total;
}

PhaseVector phase_step(const ChannelRealization& real, std::span<const double> alphas, const PhaseVector& vHat) {
  const int n = real.num_elements();
  if (vHat.size() != n) throw ArgumentError("phase_step: phase vector length mismatch");
  if (alphas.size() != static_cast<std::size_t>(real.num_devices())) {
    throw ArgumentError("phase_step: need one weight per device");
  }
  if (n == 0) return vHat;

  // beta = sum_k alpha_k C_k Q_k vbar, with Q_k vbar = qBar_k (qBar_k^H vbar).
  ComplexVector beta = ComplexVector::Zero(n + 1);
  bool flat = true;
  for (int k = 0; k < real.num_devices(); ++k) {
    const double alpha = alphas[static_cast<std::size_t>(k)];
    if (alpha < 0.0) throw ArgumentError("phase_step: weights must be >= 0");
    const Complex s = std::conj(real.hD(k)) + real.q(k).dot(vHat.coefficients());
    const double weight = alpha * std::norm(s);
    if (weight == 0.0) continue;
    flat = false;
    beta += (weight * s) * real.qBar(k);
  }
  if (flat || beta.head(n).cwiseAbs().maxCoeff() == 0.0) return vHat;

  const double lastMod = std::abs(beta(n));
  const Complex rotation = lastMod > 0.0 ? std::conj(beta(n)) / lastMod : Complex(1.0, 0.0);
  ComplexVector next(n);
  for (int i = 0; i < n; ++i) {
    const double mod = std::abs(beta(i));
    next(i) = mod > 0.0 ? beta(i) * rotation / mod : vHat[i];
  }
  return PhaseVector(std::move(next));
}

PhaseVector maximize_phases(const ChannelRealization& real, std::span<const double> alphas, PhaseVector start,
                            int maxIters, double tol, int* iterations) {
  PhaseVector v = std::move(start);
  double value = weighted_quartic_objective(real, alphas, v);
  int it = 0;
  while (it < maxIters) {
    PhaseVector next = phase_step(real, alphas, v);
    const double nextValue = weighted_quartic_objective(real, alphas, next);
    ++it;
    if (nextValue < value) break;  // rounding at a fixed point; keep the ascent exact
    const double change = (nextValue - value) / std::max(std::abs(value), 1e-300);
    v = std::move(next);
    value = nextValue;
    if (change < tol) break;
  }
  if (iterations != nullptr) *iterations = it;
  return v;
}

PhaseVector initial_phases(const ChannelRealization& real, InitStrategy strategy, Rng& rng) {
  const int n = real.num_elements();
  switch (strategy) {
    case InitStrategy::allZero:
      return PhaseVector::ones(n);
    case InitStrategy::randomPhases: {
      std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
      std::vector<double> phases(static_cast<std::size_t>(n));
      for (auto& p : phases) p = angle(rng);
      return PhaseVector::from_phases(phases);
    }
    case InitStrategy::alignStrongestUser: {
      int strongest = 0;
      for (int k = 1; k < real.num_devices(); ++k) {
        if (real.qBar(k).squaredNorm() > real.qBar(strongest).squaredNorm()) strongest = k;
      }
      // v_n = exp(j (arg q_n - arg hD)) lines every reflected term up with the
      // direct link of the strongest device.
      const Complex hd = real.hD(strongest);
      const Complex ref = std::abs(hd) > 0.0 ? std::conj(hd) / std::abs(hd) : Complex(1.0, 0.0);
      ComplexVector v(n);
      for (int i = 0; i < n; ++i) {
        const Complex qn = real.q(strongest)(i);
        v(i) = std::abs(qn) > 0.0 ? qn / std::abs(qn) * ref : Complex(1.0, 0.0);
      }
      return PhaseVector::project(v);
    }
  }
  throw ArgumentError("initial_phases: unknown strategy");
}

namespace {

ResourceSolution run_from(const ChannelRealization& real, const SystemParams& params, const AoConfig& cfg,
                          PhaseVector v) {
  TimeOptimum current = optimize_time(aggregate_gain(real, v, params), params.totalTime);
  std::vector<double> trace{current.throughput};
  int outer = 0;
  while (outer < cfg.maxOuterIters && current.time.tau0 > 0.0 && v.size() > 0) {
    ++outer;
    const auto alphas = sca_weights(current.time, params);
    PhaseVector next = maximize_phases(real, alphas, v, cfg.scaInnerIters, cfg.objectiveTol);
    const TimeOptimum updated = optimize_time(aggregate_gain(real, next, params), params.totalTime);
    if (updated.throughput < current.throughput) break;
    const double change = (updated.throughput - current.throughput) / std::max(current.throughput, 1e-300);
    v = std::move(next);
    current = updated;
    trace.push_back(current.throughput);
    if (change < cfg.objectiveTol) break;
  }
  ResourceSolution sol = make_solution(real, v, current.time, params);
  sol.iterations = outer;
  sol.objectiveTrace = std::move(trace);
  return sol;
}

}  // namespace

ResourceSolution solve_ao(const ChannelRealization& real, const SystemParams& params, const AoConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed ^ (real.seed() * 0x9e3779b97f4a7c15ULL));
  ResourceSolution best = run_from(real, params, cfg, initial_phases(real, cfg.initStrategy, rng));
  for (int r = 0; r < cfg.randomRestarts; ++r) {
    ResourceSolution candidate = run_from(real, params, cfg, initial_phases(real, InitStrategy::randomPhases, rng));
    if (candidate.sumThroughput > best.sumThroughput) best = std::move(candidate);
  }
  return best;
}

}  // namespace irswpcn
