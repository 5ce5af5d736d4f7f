#pragma once

#include <cstdint>
#include <string_view>

#include "irswpcn/ao_optimizer.hpp"
#include "irswpcn/psd_variable.hpp"
#include "irswpcn/sdp.hpp"

namespace irswpcn {

enum class JoMode { sdrBound, gaussianRounding, penalty };

std::string_view to_string(JoMode m);

struct JoConfig {
  int scaMaxIters = 50;
  double scaTol = 1e-6;  // relative change of the relaxed objective
  int randomizationCount = 100;
  double penaltyInitialRho = 1e-2;  // times lambda_max of the subproblem weight
  double penaltyGrowth = 5.0;
  double penaltyRankTol = 1e-6;     // times Tr(V)
  int penaltyMaxIters = 40;
  int tau0GridPoints = 64;
  double sdpTol = 1e-6;             // relative to Tr(C) of each subproblem
  int sdpMaxIters = 50000;
  int boundRefinements = 3;
  std::uint64_t seed = 0;
  AoConfig warmStart;               // AO run that provides the expansion point

  void validate() const;
};

/// First-order expansion of tau0 * Tr(V Q)^2 = Tr(V Q)^2 / (1/tau0) in the
/// pair (Tr(V Q), 1/tau0) around (Tr(VHat Q), 1/tauHat0):
///   G = 2 tauHat0 t x - tauHat0^2 t^2 / tau0,  t = Tr(VHat Q), x = Tr(V Q).
/// The function is jointly convex, so G is a global minorant, tight at the hat point.
double sca_bound_G(const PsdVariable& v0, double tau0, const PsdVariable& vHat0, double tauHat0,
                   const ComplexMatrix& qk);

/// sum_k P_A eta_k Tr(V Q_k)^2 / sigma^2; equals aggregate_gain for a rank-one lift.
double relaxed_aggregate(const ChannelRealization& real, const PsdVariable& v, const SystemParams& params);

struct ScaSubproblemResult {
  PsdVariable V;
  TimeAllocation time;
  double boundObjective = 0.0;  // bits/Hz, value of the convex surrogate
  double sdpGap = 0.0;
  bool gridFallback = false;
};

/// One convexified subproblem around (vHat0, tauHat0), rank constraint dropped.
/// Throws SdpError when the inner SDP misses its tolerance.
ScaSubproblemResult solve_sca_subproblem(const ChannelRealization& real, const SystemParams& params,
                                         const PsdVariable& vHat0, double tauHat0, const JoConfig& cfg);

/// Best of `count` Gaussian candidates drawn from V0's covariance, each
/// projected to unit modulus and given its optimal time split.
ResourceSolution gaussian_randomize(const PsdVariable& v0, int count, const ChannelRealization& real,
                                    const SystemParams& params, Rng& rng);

/// Everything one joint-optimization run produces. The three modes share the
/// relaxed SCA solve, so experiments compute it once per drop.
struct JoOutcome {
  ResourceSolution sdr;      // relaxed objective, diagnostics.upperBound set
  ResourceSolution rounded;  // Gaussian randomization of the relaxed solution
  ResourceSolution penalty;  // rank-one penalty path
  ResourceSolution ao;       // warm start
};

JoOutcome solve_jo_all(const ChannelRealization& real, const SystemParams& params, const JoConfig& cfg = {});

ResourceSolution solve_jo(const ChannelRealization& real, const SystemParams& params, const JoConfig& cfg,
                          JoMode mode);

}  // namespace irswpcn
