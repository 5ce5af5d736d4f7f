#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "json.hpp"

#include "irswpcn/core.hpp"

namespace irswpcn {

/// Uniform phase grid {2 pi l / L : l = 0..L-1} on each of N elements.
struct PhaseGrid {
  int pointsPerElement = 4;
  int numElements = 0;
  std::uint64_t budget = 1'000'000;  // largest enumeration accepted

  void validate() const;

  /// L^N, saturating at UINT64_MAX.
  std::uint64_t size() const;

  /// Phase vector for grid indices idx (idx[n] in [0, L)).
  PhaseVector at(const std::vector<int>& idx) const;
};

struct CommonOptimum {
  std::vector<int> index;  // grid index of the maximizer
  ResourceSolution solution;
  double objective = 0.0;  // bits/Hz, from the enumerated aggregate
};

struct PairOptimum {
  std::vector<int> index0;
  std::vector<int> index1;
  PhaseVector v0;  // used while harvesting
  PhaseVector v1;  // used while transmitting
  TimeAllocation time;
  double objective = 0.0;  // bits/Hz
};

/// Exhaustive search over one shared phase vector with the time split
/// optimized for each candidate. Ties go to the lexicographically smallest index.
/// `threads` = 0 picks the hardware concurrency; the result never depends on it.
CommonOptimum brute_force_common(const ChannelRealization& real, const SystemParams& params, const PhaseGrid& grid,
                                 unsigned threads = 0);

/// Exhaustive search over independent downlink / uplink vectors. The budget
/// applies to L^(2N).
PairOptimum brute_force_pair(const ChannelRealization& real, const SystemParams& params, const PhaseGrid& grid,
                             unsigned threads = 0);

/// Throughput of harvesting with v0 and transmitting with v1, time optimized.
TimeOptimum pair_objective(const ChannelRealization& real, const PhaseVector& v0, const PhaseVector& v1,
                           const SystemParams& params);

struct Proposition1Report {
  int numElements = 0;
  int numDevices = 0;
  int pointsPerElement = 0;
  std::uint64_t seed = 0;
  double pairMax = 0.0;
  double commonMax = 0.0;
  double difference = 0.0;  // pairMax - commonMax
  std::vector<int> pairIndex0;
  std::vector<int> pairIndex1;
  std::vector<int> commonIndex;
};

nlohmann::json to_json(const Proposition1Report& report);

/// The pair optimum beat the common optimum by more than 1e-9 max(1, commonMax).
class Proposition1Violation : public std::runtime_error {
 public:
  explicit Proposition1Violation(Proposition1Report report);
  const Proposition1Report& report() const noexcept { return report_; }

 private:
  Proposition1Report report_;
};

Proposition1Report verify_proposition1(const ChannelRealization& real, const SystemParams& params,
                                       const PhaseGrid& grid, unsigned threads = 0);

}  // namespace irswpcn
