#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "irswpcn/core.hpp"

namespace irswpcn {

enum class InitStrategy { alignStrongestUser, randomPhases, allZero };

std::string_view to_string(InitStrategy s);
InitStrategy parse_init_strategy(std::string_view name);

struct AoConfig {
  int maxOuterIters = 100;
  double objectiveTol = 1e-6;  // relative change of the sum throughput
  int scaInnerIters = 500;     // phase_step budget per time update
  InitStrategy initStrategy = InitStrategy::alignStrongestUser;
  int randomRestarts = 0;      // extra runs from random phases; best kept
  std::uint64_t seed = 0;

  void validate() const;
};

/// alpha_k = tau0 P_A eta_k / (tau1 sigma^2); zero when tau0 = 0.
std::vector<double> sca_weights(const TimeAllocation& time, const SystemParams& params);

/// sum_k alpha_k gain_k(v)^2, the phase objective for a fixed time split.
double weighted_quartic_objective(const ChannelRealization& real, std::span<const double> alphas,
                                  const PhaseVector& v);

/// One SCA step for the phase objective: maximizes the linear minorant built
/// at vHat over unit-modulus lifted vectors, then rotates the result so the
/// lifted entry is exactly 1. Never decreases weighted_quartic_objective.
PhaseVector phase_step(const ChannelRealization& real, std::span<const double> alphas, const PhaseVector& vHat);

/// Repeats phase_step until the objective's relative change drops below tol.
PhaseVector maximize_phases(const ChannelRealization& real, std::span<const double> alphas, PhaseVector start,
                            int maxIters, double tol, int* iterations = nullptr);

/// Starting point for the alternating solver.
PhaseVector initial_phases(const ChannelRealization& real, InitStrategy strategy, Rng& rng);

/// Alternating optimization of time allocation and phases.
ResourceSolution solve_ao(const ChannelRealization& real, const SystemParams& params, const AoConfig& cfg = {});

}  // namespace irswpcn
