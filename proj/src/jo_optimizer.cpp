#include "irswpcn/jo_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace irswpcn {

std::string_view to_string(JoMode m) {
  switch (m) {
    case JoMode::sdrBound: return "sdrBound";
    case JoMode::gaussianRounding: return "gaussianRounding";
    case JoMode::penalty: return "penalty";
  }
  return "unknown";
}

void JoConfig::validate() const {
  if (scaMaxIters < 1) throw ArgumentError("JoConfig: scaMaxIters must be >= 1");
  if (!(scaTol > 0.0)) throw ArgumentError("JoConfig: scaTol must be > 0");
  if (randomizationCount < 1) throw ArgumentError("JoConfig: randomizationCount must be >= 1");
  if (!(penaltyInitialRho > 0.0)) throw ArgumentError("JoConfig: penaltyInitialRho must be > 0");
  if (!(penaltyGrowth > 0.0)) throw ArgumentError("JoConfig: penaltyGrowth must be > 0");
  if (!(penaltyRankTol > 0.0)) throw ArgumentError("JoConfig: penaltyRankTol must be > 0");
  if (penaltyMaxIters < 1) throw ArgumentError("JoConfig: penaltyMaxIters must be >= 1");
  if (tau0GridPoints < 2) throw ArgumentError("JoConfig: tau0GridPoints must be >= 2");
  if (!(sdpTol > 0.0)) throw ArgumentError("JoConfig: sdpTol must be > 0");
  if (sdpMaxIters < 1) throw ArgumentError("JoConfig: sdpMaxIters must be >= 1");
  if (boundRefinements < 0) throw ArgumentError("JoConfig: boundRefinements must be >= 0");
  warmStart.validate();
}

double sca_bound_G(const PsdVariable& v0, double tau0, const PsdVariable& vHat0, double tauHat0,
                   const ComplexMatrix& qk) {
  if (!(tau0 > 0.0) || !(tauHat0 > 0.0)) throw ArgumentError("sca_bound_G: tau0 and tauHat0 must be > 0");
  const double t = vHat0.trace_product(qk);
  const double x = v0.trace_product(qk);
  return 2.0 * tauHat0 * t * x - tauHat0 * tauHat0 * t * t / tau0;
}

double relaxed_aggregate(const ChannelRealization& real, const PsdVariable& v, const SystemParams& params) {
  double total = 0.0;
  for (int k = 0; k < real.num_devices(); ++k) {
    const double t = v.trace_product(real.Q(k));
    total += params.hapPower * params.efficiency[static_cast<std::size_t>(k)] * t * t / params.noisePower;
  }
  return total;
}

namespace {

PsdVariable lift(const PhaseVector& v) { return PsdVariable::rank_one(v.lifted()); }

struct Extraction {
  PhaseVector phases;
  double error = 0.0;  // largest | |x_n| - 1 | over the scaled principal eigenvector
};

Extraction extract_phases(const PsdVariable& v) {
  auto [lambda, u] = numerics::principal_eigenpair(v.matrix());
  ComplexVector x = std::sqrt(std::max(lambda, 0.0)) * u;
  const auto last = x.size() - 1;
  if (std::abs(x(last)) > 0.0) x *= std::abs(x(last)) / x(last);
  Extraction out;
  out.phases = PhaseVector::project(x.head(last));
  for (Eigen::Index n = 0; n < x.size(); ++n) out.error = std::max(out.error, std::abs(std::abs(x(n)) - 1.0));
  return out;
}

ScaSubproblemResult subproblem(const ChannelRealization& real, const SystemParams& params, const PsdVariable& vHat0,
                               double tauHat0, const JoConfig& cfg, double penaltyRho) {
  const int d = real.num_elements() + 1;
  if (vHat0.dim() != d) throw ArgumentError("solve_sca_subproblem: expansion point has the wrong dimension");
  if (!(tauHat0 >= 0.0) || tauHat0 > params.totalTime) {
    throw ArgumentError("solve_sca_subproblem: tauHat0 outside [0, T]");
  }
  const double total = params.totalTime;

  // Sum over k of c_k G_k = Tr(C V) - D / tau0.
  ComplexMatrix c = ComplexMatrix::Zero(d, d);
  double dConst = 0.0;
  for (int k = 0; k < real.num_devices(); ++k) {
    const double ck = params.hapPower * params.efficiency[static_cast<std::size_t>(k)] / params.noisePower;
    const double t = vHat0.trace_product(real.Q(k));
    c += (2.0 * ck * tauHat0 * t) * real.Q(k);
    dConst += ck * tauHat0 * tauHat0 * t * t;
  }

  ScaSubproblemResult out;
  out.V = vHat0;
  out.time = {0.0, total};
  const double scale = c.trace().real();
  if (!(scale > 0.0)) return out;  // no reflected or direct power: rate is 0 everywhere

  ComplexMatrix objective = c;
  if (penaltyRho > 0.0) {
    // lambda_max(V) >= u^H V u at the current principal eigenvector u, so
    // -rho (Tr V - lambda_max V) is minorized by a linear term (Tr V is fixed).
    const auto [lambda, u] = numerics::principal_eigenpair(vHat0.matrix());
    (void)lambda;
    objective += (penaltyRho * numerics::lambda_max(c)) * (u * u.adjoint());
  }

  SdpOptions options;
  options.tol = cfg.sdpTol * objective.trace().real();
  options.maxIters = cfg.sdpMaxIters;
  options.warmStart = vHat0.matrix();
  const SdpResult sdp = solve_unit_diag_sdp(objective, options);
  out.V = sdp.V;
  out.sdpGap = sdp.dualityGap;

  const double m = out.V.trace_product(c);
  if (!(m > 0.0)) return out;
  const auto h = [&](double tau0) {
    const double tau1 = total - tau0;
    if (tau1 <= 0.0 || tau0 <= 0.0) return 0.0;
    const double s = std::max(0.0, m - dConst / tau0);
    return tau1 * std::log1p(s / tau1) / std::numbers::ln2;
  };
  const double lo = std::min(dConst / m, total);
  if (lo >= total) return out;

  auto best = numerics::maximize_concave_1d(h, lo, total, 1e-12 * total);
  double gridX = lo;
  double gridValue = -1.0;
  for (int i = 0; i < cfg.tau0GridPoints; ++i) {
    const double x = lo + (total - lo) * static_cast<double>(i) / static_cast<double>(cfg.tau0GridPoints - 1);
    const double value = h(x);
    if (value > gridValue) {
      gridValue = value;
      gridX = x;
    }
  }
  if (gridValue > best.value * (1.0 + 1e-4)) {
    best = {gridX, gridValue};
    out.gridFallback = true;
  }
  out.time = {best.x, total - best.x};
  out.boundObjective = best.value;
  return out;
}

struct ScaRun {
  PsdVariable V;
  TimeOptimum value;
  std::vector<double> trace;
  int iterations = 0;
  double sdpGap = 0.0;
  bool gridFallback = false;
};

// Relaxed SCA from a feasible expansion point. Only non-decreasing steps are
// taken, so the trace is monotone even with inexact subproblem solutions.
ScaRun run_sca(const ChannelRealization& real, const SystemParams& params, const JoConfig& cfg, PsdVariable start) {
  ScaRun run;
  run.V = std::move(start);
  run.value = optimize_time(relaxed_aggregate(real, run.V, params), params.totalTime);
  run.trace.push_back(run.value.throughput);
  while (run.iterations < cfg.scaMaxIters && run.value.time.tau0 > 0.0) {
    ScaSubproblemResult sub;
    try {
      sub = subproblem(real, params, run.V, run.value.time.tau0, cfg, 0.0);
    } catch (const SdpError& e) {
      run.sdpGap = std::max(run.sdpGap, e.best().dualityGap);
      break;
    }
    ++run.iterations;
    run.sdpGap = std::max(run.sdpGap, sub.sdpGap);
    run.gridFallback = run.gridFallback || sub.gridFallback;
    const TimeOptimum next = optimize_time(relaxed_aggregate(real, sub.V, params), params.totalTime);
    if (next.throughput < run.value.throughput) break;
    const double change = (next.throughput - run.value.throughput) / std::max(run.value.throughput, 1e-300);
    run.V = std::move(sub.V);
    run.value = next;
    run.trace.push_back(next.throughput);
    if (change < cfg.scaTol) break;
  }
  return run;
}

ResourceSolution relaxed_solution(const ChannelRealization& real, const SystemParams& params, const ScaRun& run) {
  ResourceSolution sol;
  const Extraction ex = extract_phases(run.V);
  sol.phases = ex.phases;
  sol.time = run.value.time;
  sol.sumThroughput = run.value.throughput;
  sol.hapEnergy = params.hapPower * sol.time.tau0;
  for (int k = 0; k < real.num_devices(); ++k) {
    const double gain = run.V.trace_product(real.Q(k));
    const double energy = params.efficiency[static_cast<std::size_t>(k)] * params.hapPower * gain * sol.time.tau0;
    sol.harvestedEnergy.push_back(energy);
    sol.powers.push_back(sol.time.tau1 > 0.0 ? energy / sol.time.tau1 : 0.0);
  }
  sol.iterations = run.iterations;
  sol.objectiveTrace = run.trace;
  sol.diagnostics.upperBound = true;
  sol.diagnostics.gridFallback = run.gridFallback;
  sol.diagnostics.rankResidual = run.V.rank_residual();
  sol.diagnostics.extractionError = ex.error;
  sol.diagnostics.sdpGap = run.sdpGap;
  return sol;
}

ResourceSolution penalty_path(const ChannelRealization& real, const SystemParams& params, const JoConfig& cfg,
                              const ScaRun& relaxed, Rng& rng) {
  PsdVariable v = relaxed.V;
  TimeAllocation time = relaxed.value.time;
  const double rankTol = cfg.penaltyRankTol * static_cast<double>(v.dim());

  Extraction ex = extract_phases(v);
  ResourceSolution best = evaluate_phases(real, ex.phases, params);
  std::vector<double> trace{best.sumThroughput};
  double rho = cfg.penaltyInitialRho;
  double sdpGap = 0.0;
  bool gridFallback = false;
  int it = 0;
  while (v.rank_residual() >= rankTol && it < cfg.penaltyMaxIters && time.tau0 > 0.0) {
    ScaSubproblemResult sub;
    try {
      sub = subproblem(real, params, v, time.tau0, cfg, rho);
    } catch (const SdpError& e) {
      sdpGap = std::max(sdpGap, e.best().dualityGap);
      break;
    }
    ++it;
    sdpGap = std::max(sdpGap, sub.sdpGap);
    gridFallback = gridFallback || sub.gridFallback;
    v = std::move(sub.V);
    time = optimize_time(relaxed_aggregate(real, v, params), params.totalTime).time;
    rho *= cfg.penaltyGrowth;

    // The incumbent is the best rank-one extraction seen along the path.
    ex = extract_phases(v);
    ResourceSolution candidate = evaluate_phases(real, ex.phases, params);
    if (candidate.sumThroughput >= best.sumThroughput) best = std::move(candidate);
    trace.push_back(best.sumThroughput);
  }

  const double residual = v.rank_residual();
  bool fallback = false;
  if (residual >= rankTol) {
    fallback = true;
    ResourceSolution rounded = gaussian_randomize(v, cfg.randomizationCount, real, params, rng);
    if (rounded.sumThroughput > best.sumThroughput) {
      best = std::move(rounded);
      trace.push_back(best.sumThroughput);
    }
  }
  best.iterations = it;
  best.objectiveTrace = std::move(trace);
  best.diagnostics.fallbackUsed = fallback;
  best.diagnostics.gridFallback = gridFallback;
  best.diagnostics.rankResidual = residual;
  best.diagnostics.extractionError = extract_phases(v).error;
  best.diagnostics.sdpGap = sdpGap;
  return best;
}

double best_feasible(const JoOutcome& out) {
  return std::max({out.rounded.sumThroughput, out.penalty.sumThroughput, out.ao.sumThroughput});
}

}  // namespace

ScaSubproblemResult solve_sca_subproblem(const ChannelRealization& real, const SystemParams& params,
                                         const PsdVariable& vHat0, double tauHat0, const JoConfig& cfg) {
  cfg.validate();
  return subproblem(real, params, vHat0, tauHat0, cfg, 0.0);
}

ResourceSolution gaussian_randomize(const PsdVariable& v0, int count, const ChannelRealization& real,
                                    const SystemParams& params, Rng& rng) {
  if (count < 1) throw ArgumentError("gaussian_randomize: count must be >= 1");
  const int d = real.num_elements() + 1;
  if (v0.dim() != d) throw ArgumentError("gaussian_randomize: V0 has the wrong dimension");

  const auto eig = numerics::hermitian_eig(v0.matrix());
  const ComplexMatrix factor = eig.eigenvectors * eig.eigenvalues.cwiseMax(0.0).cwiseSqrt().asDiagonal();

  PhaseVector best;
  double bestA = -1.0;
  ComplexVector r(d);
  for (int i = 0; i < count; ++i) {
    for (int n = 0; n < d; ++n) r(n) = numerics::standard_complex_normal(rng);
    ComplexVector u = factor * r;
    const Complex last = u(d - 1);
    if (std::abs(last) > 0.0) u *= std::abs(last) / last;
    PhaseVector candidate = PhaseVector::project(u.head(d - 1));
    // The rate is increasing in A(v), so candidates are ranked by A; the first wins ties.
    const double a = aggregate_gain(real, candidate, params);
    if (a > bestA) {
      bestA = a;
      best = std::move(candidate);
    }
  }
  return evaluate_phases(real, best, params);
}

JoOutcome solve_jo_all(const ChannelRealization& real, const SystemParams& params, const JoConfig& cfg) {
  cfg.validate();
  params.validate();
  JoOutcome out;
  out.ao = solve_ao(real, params, cfg.warmStart);

  ScaRun relaxed = run_sca(real, params, cfg, lift(out.ao.phases));
  Rng rng(cfg.seed ^ (real.seed() * 0xbf58476d1ce4e5b9ULL + 0x94d049bb133111ebULL));
  out.rounded = gaussian_randomize(relaxed.V, cfg.randomizationCount, real, params, rng);
  out.rounded.iterations = relaxed.iterations;
  out.rounded.objectiveTrace = {out.rounded.sumThroughput};
  out.rounded.diagnostics.rankResidual = relaxed.V.rank_residual();
  out.rounded.diagnostics.sdpGap = relaxed.sdpGap;
  out.penalty = penalty_path(real, params, cfg, relaxed, rng);

  // The relaxed SCA is local. A rounded point that beats it is a feasible
  // lift, so restarting from it only raises the relaxed value.
  int refinements = 0;
  while (refinements < cfg.boundRefinements && best_feasible(out) > relaxed.value.throughput) {
    const ResourceSolution& lead = out.rounded.sumThroughput >= out.penalty.sumThroughput
                                       ? (out.rounded.sumThroughput >= out.ao.sumThroughput ? out.rounded : out.ao)
                                       : (out.penalty.sumThroughput >= out.ao.sumThroughput ? out.penalty : out.ao);
    ScaRun again = run_sca(real, params, cfg, lift(lead.phases));
    ++refinements;
    again.sdpGap = std::max(again.sdpGap, relaxed.sdpGap);
    if (again.value.throughput > relaxed.value.throughput) relaxed = std::move(again);
  }
  out.sdr = relaxed_solution(real, params, relaxed);
  out.sdr.diagnostics.boundRefinements = refinements;
  return out;
}

ResourceSolution solve_jo(const ChannelRealization& real, const SystemParams& params, const JoConfig& cfg,
                          JoMode mode) {
  JoOutcome out = solve_jo_all(real, params, cfg);
  switch (mode) {
    case JoMode::sdrBound: return std::move(out.sdr);
    case JoMode::gaussianRounding: return std::move(out.rounded);
    case JoMode::penalty: return std::move(out.penalty);
  }
  throw ArgumentError("solve_jo: unknown mode");
}

}  // namespace irswpcn
