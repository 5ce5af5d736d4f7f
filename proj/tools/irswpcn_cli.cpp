// Command-line front end: scheme comparisons, the exhaustive dynamic-vs-static
// beamforming check, and config validation.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "irswpcn/errors.hpp"
#include "irswpcn/experiments.hpp"
#include "irswpcn/oracle.hpp"

namespace {

enum Exit { kOk = 0, kBadConfig = 1, kSolverFailure = 2, kIoFailure = 3 };

using namespace irswpcn;

struct RunFlags {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<int> drops;
  std::vector<std::string> schemes;
  std::vector<int> n;
  std::vector<int> k;
  std::optional<unsigned> threads;
};

ExperimentConfig resolve(const RunFlags& f) {
  ExperimentConfig cfg = f.config.empty() ? ExperimentConfig{} : load_experiment_config(f.config);
  if (f.out) cfg.outputDir = *f.out;
  if (f.seed) cfg.baseSeed = *f.seed;
  if (f.drops) cfg.drops = *f.drops;
  if (!f.schemes.empty()) {
    cfg.schemes.clear();
    for (const auto& s : f.schemes) cfg.schemes.push_back(parse_scheme(s));
  }
  if (!f.n.empty()) cfg.nValues = f.n;
  if (!f.k.empty()) cfg.kValues = f.k;
  if (f.threads) cfg.threads = *f.threads;
  cfg.validate();
  return cfg;
}

int run(const RunFlags& flags) {
  const ExperimentConfig cfg = resolve(flags);
  const auto result = run_experiment(cfg);
  std::printf("%-10s %4s %3s %6s %14s %10s\n", "scheme", "N", "K", "drops", "mean R[b/Hz]", "mean tau0");
  for (const auto& s : result.summary) {
    std::printf("%-10s %4d %3d %6d %14.6f %10.6f\n", std::string(to_string(s.scheme)).c_str(), s.N, s.K, s.drops,
                s.meanThroughput, s.meanTau0);
  }
  std::printf("wrote %zu rows to %s\n", result.rows.size(), cfg.outputDir.c_str());
  return kOk;
}

struct Prop1Flags {
  int n = 3;
  std::vector<int> k{1, 2};
  int gridPoints = 4;
  int drops = 20;
  std::uint64_t seed = 1;
  std::string out;
};

int verify_prop1(const Prop1Flags& f) {
  if (f.drops < 1) throw ArgumentError("--drops must be >= 1");
  nlohmann::json reports = nlohmann::json::array();
  double worst = 0.0;
  int violations = 0;
  for (const int k : f.k) {
    const SystemParams params = SystemParams{}.with_size(k, f.n);
    params.validate();
    PhaseGrid grid;
    grid.pointsPerElement = f.gridPoints;
    grid.numElements = f.n;
    for (int d = 0; d < f.drops; ++d) {
      const auto real = generate_drop(params, f.seed + static_cast<std::uint64_t>(d));
      Proposition1Report report;
      bool ok = true;
      try {
        report = verify_proposition1(real, params, grid);
      } catch (const Proposition1Violation& e) {
        report = e.report();
        ok = false;
        ++violations;
      }
      const double rel = report.difference / std::max(report.commonMax, 1e-300);
      worst = std::max(worst, rel);
      std::printf("K=%d drop=%llu pairMax=%.15g commonMax=%.15g diff=%.3e %s\n", k,
                  static_cast<unsigned long long>(report.seed), report.pairMax, report.commonMax, report.difference,
                  ok ? "ok" : "VIOLATION");
      reports.push_back(to_json(report));
    }
  }
  if (!f.out.empty()) {
    std::ofstream out(f.out);
    if (!out || !(out << reports.dump(2) << '\n')) throw OutputError("cannot write " + f.out);
  }
  std::printf("%zu drops, worst relative difference %.3e, %d violations\n", reports.size(), worst, violations);
  return violations == 0 ? kOk : kSolverFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IRS-assisted wireless-powered NOMA resource allocation"};
  app.require_subcommand(1);

  RunFlags runFlags;
  auto* runCmd = app.add_subcommand("run", "Monte-Carlo comparison of all schemes");
  runCmd->add_option("--config", runFlags.config, "JSON experiment config");
  runCmd->add_option("--out", runFlags.out, "output directory");
  runCmd->add_option("--seed", runFlags.seed, "base seed; drop i uses seed + i");
  runCmd->add_option("--drops", runFlags.drops, "channel drops per (N, K)");
  runCmd->add_option("--schemes", runFlags.schemes, "comma-separated scheme list")->delimiter(',');
  runCmd->add_option("--n", runFlags.n, "comma-separated IRS sizes")->delimiter(',');
  runCmd->add_option("--k", runFlags.k, "comma-separated device counts")->delimiter(',');
  runCmd->add_option("--threads", runFlags.threads, "worker threads (0 = all cores)");

  Prop1Flags propFlags;
  auto* propCmd = app.add_subcommand("verify-prop1", "exhaustive check that one phase vector serves both phases");
  propCmd->add_option("--n", propFlags.n, "IRS elements")->capture_default_str();
  propCmd->add_option("--k", propFlags.k, "comma-separated device counts")->delimiter(',')->capture_default_str();
  propCmd->add_option("--grid-points", propFlags.gridPoints, "phase grid points per element")->capture_default_str();
  propCmd->add_option("--drops", propFlags.drops, "drops per K")->capture_default_str();
  propCmd->add_option("--seed", propFlags.seed, "first drop seed")->capture_default_str();
  propCmd->add_option("--out", propFlags.out, "write the JSON reports here");

  std::string validatePath;
  auto* validateCmd = app.add_subcommand("validate-config", "parse and check a config file");
  validateCmd->add_option("config", validatePath, "JSON experiment config")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadConfig;
  }

  try {
    if (*runCmd) return run(runFlags);
    if (*propCmd) return verify_prop1(propFlags);
    if (*validateCmd) {
      const auto cfg = load_experiment_config(validatePath);
      cfg.validate();
      std::cout << to_json(cfg).dump(2) << '\n';
      return kOk;
    }
  } catch (const ArgumentError& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kBadConfig;
  } catch (const OutputError& e) {
    std::cerr << "I/O failure: " << e.what() << '\n';
    return kIoFailure;
  } catch (const std::exception& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kSolverFailure;
  }
  return kOk;
}
