#include "irswpcn/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <thread>

#include "irswpcn/errors.hpp"

namespace irswpcn {

void PhaseGrid::validate() const {
  if (pointsPerElement < 2) throw ArgumentError("PhaseGrid: pointsPerElement must be >= 2");
  if (numElements < 0) throw ArgumentError("PhaseGrid: numElements must be >= 0");
}

std::uint64_t PhaseGrid::size() const {
  std::uint64_t total = 1;
  const auto l = static_cast<std::uint64_t>(pointsPerElement);
  for (int n = 0; n < numElements; ++n) {
    if (total > std::numeric_limits<std::uint64_t>::max() / l) return std::numeric_limits<std::uint64_t>::max();
    total *= l;
  }
  return total;
}

PhaseVector PhaseGrid::at(const std::vector<int>& idx) const {
  if (idx.size() != static_cast<std::size_t>(numElements)) throw ArgumentError("PhaseGrid::at: index length mismatch");
  std::vector<double> phases(idx.size());
  for (std::size_t n = 0; n < idx.size(); ++n) {
    if (idx[n] < 0 || idx[n] >= pointsPerElement) throw ArgumentError("PhaseGrid::at: index out of range");
    phases[n] = 2.0 * std::numbers::pi * idx[n] / pointsPerElement;
  }
  return PhaseVector::from_phases(phases);
}

namespace {

// Digit 0 is the most significant, so integer order is lexicographic order.
std::vector<int> decode(std::uint64_t flat, const PhaseGrid& grid) {
  std::vector<int> idx(static_cast<std::size_t>(grid.numElements));
  for (int n = grid.numElements - 1; n >= 0; --n) {
    idx[static_cast<std::size_t>(n)] = static_cast<int>(flat % static_cast<std::uint64_t>(grid.pointsPerElement));
    flat /= static_cast<std::uint64_t>(grid.pointsPerElement);
  }
  return idx;
}

void check_budget(const PhaseGrid& grid, std::uint64_t required, const char* who) {
  if (required > grid.budget) {
    throw BudgetExceeded(std::string(who) + ": enumeration of " + std::to_string(required) +
                             " candidates exceeds the budget of " + std::to_string(grid.budget),
                         required, grid.budget);
  }
}

// gains[i * K + k] = gain_k of grid vector i.
std::vector<double> gain_table(const ChannelRealization& real, const PhaseGrid& grid) {
  const int k = real.num_devices();
  const int n = grid.numElements;
  const int l = grid.pointsPerElement;
  std::vector<Complex> unit(static_cast<std::size_t>(l));
  for (int i = 0; i < l; ++i) unit[static_cast<std::size_t>(i)] = std::polar(1.0, 2.0 * std::numbers::pi * i / l);

  const std::uint64_t count = grid.size();
  std::vector<double> table(count * static_cast<std::uint64_t>(k));
  for (std::uint64_t flat = 0; flat < count; ++flat) {
    const auto idx = decode(flat, grid);
    for (int dev = 0; dev < k; ++dev) {
      Complex s = std::conj(real.hD(dev));
      const ComplexVector& q = real.q(dev);
      for (int e = 0; e < n; ++e) s += std::conj(q(e)) * unit[static_cast<std::size_t>(idx[static_cast<std::size_t>(e)])];
      table[flat * static_cast<std::uint64_t>(k) + static_cast<std::uint64_t>(dev)] = std::norm(s);
    }
  }
  return table;
}

struct Best {
  double value = -1.0;
  std::uint64_t flat = 0;
};

// Max over [0, total) of score(i); the smallest index wins ties. Each chunk
// keeps its own first maximizer, and the merge compares (value, index), so
// the result is the same for any chunking.
template <typename Score>
Best parallel_argmax(std::uint64_t total, unsigned threads, const Score& score) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const auto chunks = static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(total, 1)));
  std::vector<Best> partial(chunks);
  const auto work = [&](unsigned c) {
    const std::uint64_t lo = total * c / chunks;
    const std::uint64_t hi = total * (c + 1) / chunks;
    Best b;
    for (std::uint64_t i = lo; i < hi; ++i) {
      const double v = score(i);
      if (v > b.value) b = {v, i};
    }
    partial[c] = b;
  };
  if (chunks == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned c = 0; c < chunks; ++c) pool.emplace_back(work, c);
    for (auto& t : pool) t.join();
  }
  Best best;
  for (const auto& b : partial) {
    if (b.value > best.value || (b.value == best.value && b.flat < best.flat)) best = b;
  }
  return best;
}

std::vector<double> device_weights(const ChannelRealization& real, const SystemParams& params) {
  if (params.efficiency.size() != static_cast<std::size_t>(real.num_devices())) {
    throw ArgumentError("oracle: efficiency vector does not match the device count");
  }
  std::vector<double> c(params.efficiency.size());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = params.hapPower * params.efficiency[k] / params.noisePower;
  return c;
}

void check_grid(const ChannelRealization& real, const PhaseGrid& grid) {
  grid.validate();
  if (grid.numElements != real.num_elements()) throw ArgumentError("oracle: grid size does not match N");
}

}  // namespace

// The rate is strictly increasing in the aggregate A, so ranking candidates by
// A and optimizing time once gives the same argmax as optimizing per candidate.
CommonOptimum brute_force_common(const ChannelRealization& real, const SystemParams& params, const PhaseGrid& grid,
                                 unsigned threads) {
  check_grid(real, grid);
  const std::uint64_t count = grid.size();
  check_budget(grid, count, "brute_force_common");
  const auto c = device_weights(real, params);
  const auto table = gain_table(real, grid);
  const auto k = c.size();

  const Best best = parallel_argmax(count, threads, [&](std::uint64_t i) {
    double a = 0.0;
    for (std::size_t dev = 0; dev < k; ++dev) a += c[dev] * table[i * k + dev] * table[i * k + dev];
    return a;
  });
  CommonOptimum out;
  out.index = decode(best.flat, grid);
  out.solution = evaluate_phases(real, grid.at(out.index), params);
  out.objective = optimize_time(best.value, params.totalTime).throughput;
  return out;
}

TimeOptimum pair_objective(const ChannelRealization& real, const PhaseVector& v0, const PhaseVector& v1,
                           const SystemParams& params) {
  const auto c = device_weights(real, params);
  const auto g0 = device_gains(real, v0);
  const auto g1 = device_gains(real, v1);
  double a = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) a += c[k] * g0[k] * g1[k];
  return optimize_time(a, params.totalTime);
}

PairOptimum brute_force_pair(const ChannelRealization& real, const SystemParams& params, const PhaseGrid& grid,
                             unsigned threads) {
  check_grid(real, grid);
  const std::uint64_t count = grid.size();
  const std::uint64_t required =
      count > std::numeric_limits<std::uint64_t>::max() / count ? std::numeric_limits<std::uint64_t>::max()
                                                                 : count * count;
  check_budget(grid, required, "brute_force_pair");
  const auto c = device_weights(real, params);
  const auto table = gain_table(real, grid);
  const auto k = c.size();

  const Best best = parallel_argmax(required, threads, [&](std::uint64_t flat) {
    const std::uint64_t i = flat / count;
    const std::uint64_t j = flat % count;
    double a = 0.0;
    for (std::size_t dev = 0; dev < k; ++dev) a += c[dev] * table[i * k + dev] * table[j * k + dev];
    return a;
  });
  PairOptimum out;
  out.index0 = decode(best.flat / count, grid);
  out.index1 = decode(best.flat % count, grid);
  out.v0 = grid.at(out.index0);
  out.v1 = grid.at(out.index1);
  const TimeOptimum opt = optimize_time(best.value, params.totalTime);
  out.time = opt.time;
  out.objective = opt.throughput;
  return out;
}

nlohmann::json to_json(const Proposition1Report& report) {
  return {
      {"numElements", report.numElements},
      {"numDevices", report.numDevices},
      {"pointsPerElement", report.pointsPerElement},
      {"seed", report.seed},
      {"pairMax", report.pairMax},
      {"commonMax", report.commonMax},
      {"difference", report.difference},
      {"pairIndex0", report.pairIndex0},
      {"pairIndex1", report.pairIndex1},
      {"commonIndex", report.commonIndex},
  };
}

Proposition1Violation::Proposition1Violation(Proposition1Report report)
    : std::runtime_error("pair optimum exceeds common optimum by " + std::to_string(report.difference) +
                         " bits/Hz: " + to_json(report).dump()),
      report_(std::move(report)) {}

Proposition1Report verify_proposition1(const ChannelRealization& real, const SystemParams& params,
                                       const PhaseGrid& grid, unsigned threads) {
  const PairOptimum pair = brute_force_pair(real, params, grid, threads);
  const CommonOptimum common = brute_force_common(real, params, grid, threads);

  Proposition1Report report;
  report.numElements = real.num_elements();
  report.numDevices = real.num_devices();
  report.pointsPerElement = grid.pointsPerElement;
  report.seed = real.seed();
  report.pairMax = pair.objective;
  report.commonMax = common.objective;
  report.difference = report.pairMax - report.commonMax;
  report.pairIndex0 = pair.index0;
  report.pairIndex1 = pair.index1;
  report.commonIndex = common.index;
  if (report.difference > 1e-9 * std::max(1.0, report.commonMax)) throw Proposition1Violation(std::move(report));
  return report;
}

}  // namespace irswpcn
