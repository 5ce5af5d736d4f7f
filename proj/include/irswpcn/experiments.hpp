#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "irswpcn/ao_optimizer.hpp"
#include "irswpcn/jo_optimizer.hpp"

namespace irswpcn {

enum class Scheme { joSdr, joGr, joPenalty, ao, fixedTime, fixedPhase, noIrs };

std::string_view to_string(Scheme s);
Scheme parse_scheme(std::string_view name);
const std::vector<Scheme>& all_schemes();

/// A solver failed on one (scheme, drop); the message names both.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The output directory cannot be created or written.
class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolverConfigs {
  AoConfig ao;
  JoConfig jo;  // jo.warmStart is replaced by `ao` when schemes run together
};

struct ExperimentConfig {
  SystemParams params;
  std::vector<int> nValues{4, 8, 16, 32};
  std::vector<int> kValues{5};
  std::vector<Scheme> schemes = all_schemes();
  int drops = 100;
  std::uint64_t baseSeed = 1;
  std::string outputDir = "results";
  unsigned threads = 0;  // 0 = hardware concurrency
  SolverConfigs solvers;

  /// Throws ArgumentError on the first problem found.
  void validate() const;
};

nlohmann::json to_json(const ExperimentConfig& cfg);

/// Missing keys keep their defaults; unknown keys and malformed values throw
/// ArgumentError. Range checks are left to validate().
ExperimentConfig experiment_config_from_json(const nlohmann::json& doc);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

struct SchemeResultRow {
  Scheme scheme = Scheme::ao;
  int N = 0;
  int K = 0;
  std::uint64_t dropSeed = 0;
  double sumThroughput = 0.0;  // bits/Hz
  double tau0 = 0.0;           // s
  double tau1 = 0.0;           // s
  double hapEnergy = 0.0;      // J
  std::vector<double> harvestedEnergy;
  int iterations = 0;
  double wallTime = 0.0;       // s
};

SchemeResultRow make_row(Scheme scheme, const ResourceSolution& sol, const ChannelRealization& real);

SchemeResultRow run_scheme(Scheme scheme, const ChannelRealization& real, const SystemParams& params,
                           const SolverConfigs& cfgs);

/// Runs several schemes on one drop. The JO schemes share a single joint
/// solve, whose warm-start AO run also provides the ao row.
std::vector<SchemeResultRow> run_schemes(const std::vector<Scheme>& schemes, const ChannelRealization& real,
                                         const SystemParams& params, const SolverConfigs& cfgs);

struct SummaryRow {
  Scheme scheme = Scheme::ao;
  int N = 0;
  int K = 0;
  int drops = 0;
  double meanThroughput = 0.0;
  double stdThroughput = 0.0;
  double meanTau0 = 0.0;
  double stdTau0 = 0.0;
  double meanHapEnergy = 0.0;
  double stdHapEnergy = 0.0;
  std::vector<double> meanEnergy;  // per device
  std::vector<double> stdEnergy;
};

/// Mean and sample standard deviation per (scheme, N, K); rows must be sorted.
std::vector<SummaryRow> summarize(const std::vector<SchemeResultRow>& rows);

struct ExperimentResult {
  std::vector<SchemeResultRow> rows;  // sorted by (scheme, N, K, dropSeed)
  std::vector<SummaryRow> summary;
};

/// Solves every (N, K, drop) work item on a bounded worker pool, then writes
/// results.csv, summary.csv, timings.csv and the panel_*.dat files into
/// cfg.outputDir (unless it is empty). The directory is checked before solving.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

void write_results_csv(const std::filesystem::path& path, const std::vector<SchemeResultRow>& rows);
void write_summary_csv(const std::filesystem::path& path, const std::vector<SummaryRow>& summary);
void write_timings_csv(const std::filesystem::path& path, const std::vector<SchemeResultRow>& rows);
void write_panels(const std::filesystem::path& dir, const std::vector<SummaryRow>& summary);

}  // namespace irswpcn
