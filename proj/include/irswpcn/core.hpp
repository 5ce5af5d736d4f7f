#pragma once

#include <span>
#include <string>
#include <vector>

#include "irswpcn/channel.hpp"
#include "irswpcn/phase_vector.hpp"

namespace irswpcn {

/// Harvest-then-transmit split of the frame: tau0 for downlink power
/// transfer, tau1 for uplink NOMA transmission.
struct TimeAllocation {
  double tau0 = 0.0;
  double tau1 = 0.0;

  bool feasible(double totalTime, double tol = 1e-12) const {
    return tau0 >= -tol && tau1 >= -tol && tau0 + tau1 <= totalTime + tol;
  }
};

struct SolveDiagnostics {
  bool upperBound = false;     // value is a relaxation bound, not an achievable rate
  bool fallbackUsed = false;   // penalty mode fell back to Gaussian rounding
  bool gridFallback = false;   // a 1-D search was overridden by the coarse grid
  double rankResidual = 0.0;   // Tr(V) - lambda_max(V) of the final lifted matrix
  double extractionError = 0.0;
  double sdpGap = 0.0;         // largest certified SDP gap seen during the solve
  int boundRefinements = 0;
};

struct ResourceSolution {
  PhaseVector phases;
  TimeAllocation time;
  std::vector<double> powers;           // W
  double sumThroughput = 0.0;           // bits/Hz
  std::vector<double> harvestedEnergy;  // J
  double hapEnergy = 0.0;               // J, P_A * tau0
  int iterations = 0;
  std::vector<double> objectiveTrace;
  SolveDiagnostics diagnostics;
};

/// |h_{d,k}^H + q_k^H v|^2 for every device.
std::vector<double> device_gains(const ChannelRealization& real, const PhaseVector& v);

/// eta_k * P_A * gain_k(v) * tau0.
double harvested_energy(const ChannelRealization& real, int k, const PhaseVector& v, double tau0,
                        const SystemParams& params);

/// Per-device SIC rates. order[0] is decoded first; every device treats the
/// devices decoded after it as noise.
std::vector<double> per_user_rates(const ChannelRealization& real, const PhaseVector& v,
                                   std::span<const double> powers, double tau1, std::span<const int> order,
                                   const SystemParams& params);

/// tau1 * log2(1 + sum_k p_k gain_k / sigma^2); 0 when tau1 = 0.
double sum_throughput(const ChannelRealization& real, const PhaseVector& v, std::span<const double> powers,
                      double tau1, const SystemParams& params);

/// Powers with energy causality active: p_k = eta_k P_A gain_k tau0 / tau1.
/// Throws DegenerateAllocation when tau1 = 0 and tau0 > 0.
std::vector<double> recover_powers(const ChannelRealization& real, const PhaseVector& v,
                                   const TimeAllocation& time, const SystemParams& params);

/// A(v) = sum_k P_A eta_k gain_k(v)^2 / sigma^2. With powers recovered, the
/// sum throughput is tau1 * log2(1 + A tau0 / tau1).
double aggregate_gain(const ChannelRealization& real, const PhaseVector& v, const SystemParams& params);

/// Same aggregate from arbitrary per-device gains.
double aggregate_gain_from(std::span<const double> gains, const SystemParams& params);

struct TimeOptimum {
  TimeAllocation time;
  double throughput = 0.0;  // bits/Hz
};

/// Global maximizer of tau1 * log2(1 + A (T - tau1) / tau1) over tau1 in (0, T].
///
/// Stationarity in z = 1 + A tau0 / tau1 reads z ln z - z + 1 = A; the left
/// side is increasing on z >= 1, so the root is bracketed and bisected, then
/// tau1 = A T / (z - 1 + A). A = 0 returns tau0 = 0, tau1 = T.
TimeOptimum optimize_time(double aggregateGain, double totalTime);

/// Throughput of a fixed phase vector and time split, powers recovered.
ResourceSolution make_solution(const ChannelRealization& real, const PhaseVector& v, const TimeAllocation& time,
                               const SystemParams& params);

/// Optimal time allocation for fixed phases, packaged as a full solution.
ResourceSolution evaluate_phases(const ChannelRealization& real, const PhaseVector& v,
                                 const SystemParams& params);

/// Checks energy causality, the time budget, non-negativity and unit modulus.
/// Returns an empty string when feasible, otherwise the first violation.
std::string feasibility_violation(const ResourceSolution& sol, const ChannelRealization& real,
                                  const SystemParams& params, double tol = 1e-8);

}  // namespace irswpcn
