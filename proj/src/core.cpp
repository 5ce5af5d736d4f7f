#include "irswpcn/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "irswpcn/errors.hpp"

namespace irswpcn {

std::vector<double> device_gains(const ChannelRealization& real, const PhaseVector& v) {
  std::vector<double> gains(static_cast<std::size_t>(real.num_devices()));
  for (int k = 0; k < real.num_devices(); ++k) gains[static_cast<std::size_t>(k)] = composite_gain(real, k, v);
  return gains;
}

double harvested_energy(const ChannelRealization& real, int k, const PhaseVector& v, double tau0,
                        const SystemParams& params) {
  return params.efficiency.at(static_cast<std::size_t>(k)) * params.hapPower * composite_gain(real, k, v) * tau0;
}

std::vector<double> per_user_rates(const ChannelRealization& real, const PhaseVector& v,
                                   std::span<const double> powers, double tau1, std::span<const int> order,
                                   const SystemParams& params) {
  const auto devices = static_cast<std::size_t>(real.num_devices());
  if (powers.size() != devices || order.size() != devices) {
    throw ArgumentError("per_user_rates: powers and order need one entry per device");
  }
  std::vector<bool> seen(devices, false);
  for (const int k : order) {
    if (k < 0 || static_cast<std::size_t>(k) >= devices || seen[static_cast<std::size_t>(k)]) {
      throw ArgumentError("per_user_rates: order is not a permutation of the devices");
    }
    seen[static_cast<std::size_t>(k)] = true;
  }

  const auto gains = device_gains(real, v);
  std::vector<double> rates(devices, 0.0);
  if (tau1 <= 0.0) return rates;

  // Walk the decoding order backwards so `interference` always holds the
  // received power of the devices decoded later.
  double interference = 0.0;
  for (std::size_t pos = devices; pos-- > 0;) {
    const auto k = static_cast<std::size_t>(order[pos]);
    const double received = powers[k] * gains[k];
    rates[k] = tau1 * std::log2(1.0 + received / (interference + params.noisePower));
    interference += received;
  }
  return rates;
}

double sum_throughput(const ChannelRealization& real, const PhaseVector& v, std::span<const double> powers,
                      double tau1, const SystemParams& params) {
  if (powers.size() != static_cast<std::size_t>(real.num_devices())) {
    throw ArgumentError("sum_throughput: powers need one entry per device");
  }
  if (tau1 <= 0.0) return 0.0;
  const auto gains = device_gains(real, v);
  double snr = 0.0;
  for (std::size_t k = 0; k < gains.size(); ++k) snr += powers[k] * gains[k] / params.noisePower;
  return tau1 * std::log2(1.0 + snr);
}

std::vector<double> recover_powers(const ChannelRealization& real, const PhaseVector& v,
                                   const TimeAllocation& time, const SystemParams& params) {
  const auto devices = static_cast<std::size_t>(real.num_devices());
  if (time.tau0 <= 0.0) return std::vector<double>(devices, 0.0);
  if (time.tau1 <= 0.0) {
    throw DegenerateAllocation("recover_powers: tau1 = 0 with tau0 > 0 admits no finite power");
  }
  std::vector<double> powers(devices);
  for (std::size_t k = 0; k < devices; ++k) {
    powers[k] = harvested_energy(real, static_cast<int>(k), v, time.tau0, params) / time.tau1;
  }
  return powers;
}

double aggregate_gain_from(std::span<const double> gains, const SystemParams& params) {
  double a = 0.0;
  for (std::size_t k = 0; k < gains.size(); ++k) {
    a += params.hapPower * params.efficiency.at(k) * gains[k] * gains[k];
  }
  return a / params.noisePower;
}

double aggregate_gain(const ChannelRealization& real, const PhaseVector& v, const SystemParams& params) {
  const auto gains = device_gains(real, v);
  return aggregate_gain_from(gains, params);
}

TimeOptimum optimize_time(double aggregateGain, double totalTime) {
  if (!(aggregateGain >= 0.0)) throw ArgumentError("optimize_time: aggregate gain must be >= 0");
  if (!(totalTime > 0.0)) throw ArgumentError("optimize_time: total time must be > 0");
  const double a = aggregateGain;
  if (a == 0.0) return {{0.0, totalTime}, 0.0};

  // Solve (1 + w) ln(1 + w) - w = A for w = z - 1 >= 0. log1p keeps the
  // small-A regime (w ~ sqrt(2A)) accurate.
  const auto lhs = [](double w) { return (1.0 + w) * std::log1p(w) - w; };
  double lo = 0.0;
  double hi = a + std::sqrt(2.0 * a * std::numbers::e);
  while (lhs(hi) < a) hi *= 2.0;
  for (int it = 0; it < 400 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (lhs(mid) < a ? lo : hi) = mid;
  }
  const double w = 0.5 * (lo + hi);
  const double tau1 = a * totalTime / (w + a);
  const double tau0 = totalTime - tau1;
  return {{tau0, tau1}, tau1 * std::log1p(w) / std::numbers::ln2};
}

ResourceSolution make_solution(const ChannelRealization& real, const PhaseVector& v, const TimeAllocation& time,
                               const SystemParams& params) {
  ResourceSolution sol;
  sol.phases = v;
  sol.time = time;
  sol.powers = recover_powers(real, v, time, params);
  sol.sumThroughput = sum_throughput(real, v, sol.powers, time.tau1, params);
  sol.harvestedEnergy.resize(static_cast<std::size_t>(real.num_devices()));
  for (int k = 0; k < real.num_devices(); ++k) {
    sol.harvestedEnergy[static_cast<std::size_t>(k)] = harvested_energy(real, k, v, time.tau0, params);
  }
  sol.hapEnergy = params.hapPower * time.tau0;
  return sol;
}

ResourceSolution evaluate_phases(const ChannelRealization& real, const PhaseVector& v,
                                 const SystemParams& params) {
  const auto best = optimize_time(aggregate_gain(real, v, params), params.totalTime);
  auto sol = make_solution(real, v, best.time, params);
  sol.objectiveTrace = {best.throughput};
  return sol;
}

std::string feasibility_violation(const ResourceSolution& sol, const ChannelRealization& real,
                                  const SystemParams& params, double tol) {
  std::ostringstream why;
  if (sol.phases.size() != real.num_elements()) return "phase vector length mismatch";
  for (int n = 0; n < sol.phases.size(); ++n) {
    if (std::abs(std::abs(sol.phases[n]) - 1.0) > tol) {
      why << "unit modulus violated at element " << n;
      return why.str();
    }
  }
  if (sol.time.tau0 < -tol || sol.time.tau1 < -tol) return "negative time";
  if (sol.time.tau0 + sol.time.tau1 > params.totalTime + tol) return "time budget exceeded";
  if (sol.powers.size() != static_cast<std::size_t>(real.num_devices())) return "power vector length mismatch";
  for (int k = 0; k < real.num_devices(); ++k) {
    const double p = sol.powers[static_cast<std::size_t>(k)];
    if (p < -tol) return "negative power";
    const double energy = harvested_energy(real, k, sol.phases, sol.time.tau0, params);
    if (p * sol.time.tau1 > energy + tol) {
      why << "energy causality violated for device " << k;
      return why.str();
    }
  }
  return {};
}

}  // namespace irswpcn
