// Runs acceptance criteria 1-9 and prints one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "irswpcn/experiments.hpp"
#include "irswpcn/oracle.hpp"
#include "irswpcn/sdp.hpp"

using namespace irswpcn;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

ComplexVector random_vector(int n, Rng& rng) {
  ComplexVector v(n);
  for (int i = 0; i < n; ++i) v(i) = numerics::standard_complex_normal(rng);
  return v;
}

PhaseVector random_phases(int n, Rng& rng) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  std::vector<double> ph(static_cast<std::size_t>(n));
  for (auto& x : ph) x = angle(rng);
  return PhaseVector::from_phases(ph);
}

bool non_decreasing(const std::vector<double>& trace) {
  for (std::size_t i = 1; i < trace.size(); ++i) {
    if (trace[i] < trace[i - 1] - 1e-12 * std::max(1.0, std::abs(trace[i - 1]))) return false;
  }
  return true;
}

double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(IRSWPCN_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome criterion1() {
  Outcome out;
  PhaseGrid grid;
  grid.numElements = 3;
  grid.pointsPerElement = 4;
  double worst = 0.0;
  for (const int k : {1, 2}) {
    const SystemParams p = SystemParams{}.with_size(k, 3);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      try {
        const auto report = verify_proposition1(generate_drop(p, seed), p, grid);
        const double diff = std::abs(report.pairMax - report.commonMax);
        worst = std::max(worst, diff / std::max(report.commonMax, 1e-300));
        if (diff > 1e-9 * report.commonMax) out.fail(fmt("K=%g seed=%g diff=%.3e", k, seed, diff));
      } catch (const Proposition1Violation& e) {
        out.fail(e.what());
      }
    }
  }
  const int code = run_cli("verify-prop1 --n 3 --k 1,2 --grid-points 4 --drops 20");
  if (code != 0) out.fail("verify-prop1 exited with " + std::to_string(code));
  if (out.pass) out.detail = fmt("40 drops, worst relative |pair - common| = %.3e; CLI exit 0", worst);
  return out;
}

Outcome criterion2() {
  Outcome out;
  Rng rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 1 + trial % 5;
    const int n = trial % 9;
    const SystemParams p = SystemParams{}.with_size(k, n);
    const auto real = generate_drop(p, static_cast<std::uint64_t>(1000 + trial));
    const auto v = random_phases(n, rng);
    const double tau1 = u(rng);
    // Powers at the energy-causality limit of a random split, scaled down at random.
    const auto limit = recover_powers(real, v, {1.0 - tau1, tau1}, p);
    std::vector<double> powers(limit.size());
    for (std::size_t i = 0; i < powers.size(); ++i) powers[i] = limit[i] * u(rng);
    const double total = sum_throughput(real, v, powers, tau1, p);
    std::vector<int> order(static_cast<std::size_t>(k));
    std::iota(order.begin(), order.end(), 0);
    for (int o = 0; o < 5; ++o) {
      std::shuffle(order.begin(), order.end(), rng);
      const auto rates = per_user_rates(real, v, powers, tau1, order, p);
      const double diff = std::abs(std::accumulate(rates.begin(), rates.end(), 0.0) - total);
      worst = std::max(worst, diff);
      if (diff > 1e-10) out.fail(fmt("trial %g: |sum r_k - R| = %.3e", trial, diff));
    }
  }
  if (out.pass) out.detail = fmt("500 orders, worst |sum r_k - R| = %.3e", worst);
  return out;
}

Outcome criterion3() {
  Outcome out;
  const auto grid = [](double a) {
    double best = 0.0;
    const int points = 1'000'000;
    for (int i = 1; i <= points; ++i) {
      const double tau1 = static_cast<double>(i) / points;
      best = std::max(best, tau1 * std::log2(1.0 + a * (1.0 - tau1) / tau1));
    }
    return best;
  };
  Rng rng(3);
  std::uniform_real_distribution<double> logA(-3.0, 4.0);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double a = std::pow(10.0, logA(rng));
    const auto r = optimize_time(a, 1.0);
    const double g = grid(a);
    const double err = std::abs(r.throughput - g) / r.throughput;
    worst = std::max(worst, err);
    if (err > 1e-6) out.fail(fmt("A=%.6g: optimize %.12g grid %.12g", a, r.throughput, g));
  }
  const auto one = optimize_time(1.0, 1.0);
  if (std::abs(one.time.tau1 - 1.0 / M_E) > 1e-6) out.fail(fmt("A=1: tau1 = %.12g", one.time.tau1));
  if (std::abs(one.throughput - 0.53074) > 1e-5 || rel(one.throughput, grid(1.0)) > 1e-6) {
    out.fail(fmt("A=1: R = %.12g", one.throughput));
  }
  if (out.pass) out.detail = fmt("worst relative gap to grid %.3e; A=1: tau1=%.9f R=%.9f", worst, one.time.tau1, one.throughput);
  return out;
}

Outcome criterion4() {
  Outcome out;
  Rng rng(4);
  std::uniform_int_distribution<int> nDist(1, 16);
  std::uniform_int_distribution<int> kDist(1, 5);
  std::size_t steps = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const SystemParams p = SystemParams{}.with_size(kDist(rng), nDist(rng));
    const auto real = generate_drop(p, static_cast<std::uint64_t>(4000 + trial));
    const auto jo = solve_jo_all(real, p);
    const std::pair<const char*, const ResourceSolution*> sols[] = {
        {"ao", &jo.ao}, {"joSdr", &jo.sdr}, {"joGr", &jo.rounded}, {"joPenalty", &jo.penalty}};
    for (const auto& [name, sol] : sols) {
      steps += sol->objectiveTrace.size();
      if (!non_decreasing(sol->objectiveTrace)) {
        out.fail(std::string(name) + fmt(" trace decreases on drop %g (K=%g, N=%g)", trial, p.numDevices, p.numElements));
      }
    }
  }
  if (out.pass) out.detail = fmt("100 drops, %g trace entries checked", static_cast<double>(steps));
  return out;
}

Outcome criterion5() {
  Outcome out;
  double worstAo = 0.0;
  double worstJo = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const SystemParams p = SystemParams{}.with_size(1, 16);
    const auto real = generate_drop(p, 500 + seed);
    const double bound = std::pow(std::abs(real.hD(0)) + real.q(0).cwiseAbs().sum(), 2);
    const auto jo = solve_jo_all(real, p);
    const double aoErr = rel(composite_gain(real, 0, jo.ao.phases), bound);
    worstAo = std::max(worstAo, aoErr);
    if (aoErr > 1e-6) out.fail(fmt("seed %g: AO gain off by %.3e", seed, aoErr));
    // The closed form in rate terms: the optimal split for the bound gain.
    const double target = optimize_time(p.hapPower * p.efficiency[0] * bound * bound / p.noisePower, p.totalTime).throughput;
    for (const auto* sol : {&jo.sdr, &jo.rounded, &jo.penalty}) {
      const double err = rel(sol->sumThroughput, target);
      worstJo = std::max(worstJo, err);
      if (err > 1e-3) out.fail(fmt("seed %g: JO rate off by %.3e", seed, err));
    }
  }
  if (out.pass) out.detail = fmt("worst AO gain error %.3e, worst JO rate error %.3e", worstAo, worstJo);
  return out;
}

ExperimentResult default_experiment() {
  ExperimentConfig cfg;
  cfg.outputDir.clear();
  return run_experiment(cfg);
}

using Key = std::tuple<int, int, std::uint64_t>;

Outcome criterion6(const ExperimentResult& def) {
  Outcome out;
  std::map<Key, std::map<Scheme, double>> byDrop;
  for (const auto& r : def.rows) byDrop[{r.N, r.K, r.dropSeed}][r.scheme] = r.sumThroughput;
  for (const auto& [key, rates] : byDrop) {
    const double sdr = rates.at(Scheme::joSdr);
    for (const Scheme s : {Scheme::joGr, Scheme::joPenalty, Scheme::ao}) {
      if (rates.at(s) > sdr * (1.0 + 1e-6)) {
        out.fail(std::string(to_string(s)) + fmt(" beats joSdr at N=%g seed=%g by %.3e", std::get<0>(key),
                                                 static_cast<double>(std::get<2>(key)), rates.at(s) / sdr - 1.0));
      }
    }
  }

  ExperimentConfig cfg;
  cfg.outputDir.clear();
  cfg.nValues = {8, 16, 32};
  cfg.drops = 50;
  cfg.schemes = {Scheme::joSdr, Scheme::ao};
  const auto res = run_experiment(cfg);
  std::string ratios;
  for (const int n : cfg.nValues) {
    double ao = 0.0;
    double sdr = 0.0;
    for (const auto& s : res.summary) {
      if (s.N != n) continue;
      (s.scheme == Scheme::ao ? ao : sdr) = s.meanThroughput;
    }
    ratios += fmt(" N=%g:%.6f", n, ao / sdr);
    if (!(ao / sdr >= 0.95)) out.fail(fmt("mean(ao)/mean(joSdr) = %.4f at N=%g", ao / sdr, n));
  }
  if (out.pass) out.detail = fmt("%g drops dominated;", static_cast<double>(byDrop.size())) + " ao/joSdr" + ratios;
  return out;
}

Outcome criterion7(const ExperimentResult& def) {
  Outcome out;
  std::map<Scheme, std::vector<const SummaryRow*>> byScheme;  // ascending N
  for (const auto& s : def.summary) byScheme[s.scheme].push_back(&s);
  for (auto& [scheme, rows] : byScheme) {
    std::sort(rows.begin(), rows.end(), [](const auto* a, const auto* b) { return a->N < b->N; });
  }
  const auto& ao = byScheme.at(Scheme::ao);
  const auto& gr = byScheme.at(Scheme::joGr);
  const auto& fixedPhase = byScheme.at(Scheme::fixedPhase);
  const auto& noIrs = byScheme.at(Scheme::noIrs);
  for (std::size_t i = 0; i < ao.size(); ++i) {
    const int n = ao[i]->N;
    if (i > 0) {
      if (!(ao[i]->meanThroughput > ao[i - 1]->meanThroughput)) out.fail(fmt("(a) ao not increasing at N=%g", n));
      if (!(gr[i]->meanThroughput > gr[i - 1]->meanThroughput)) out.fail(fmt("(a) joGr not increasing at N=%g", n));
      if (!(ao[i]->meanTau0 < ao[i - 1]->meanTau0)) out.fail(fmt("(b) ao tau0 not decreasing at N=%g", n));
      if (!(ao[i]->meanHapEnergy < ao[i - 1]->meanHapEnergy)) out.fail(fmt("(b) E_HAP not decreasing at N=%g", n));
      for (std::size_t k = 0; k < ao[i]->meanEnergy.size(); ++k) {
        if (!(ao[i]->meanEnergy[k] > ao[i - 1]->meanEnergy[k])) {
          out.fail(fmt("(c) device %g energy not increasing at N=%g", static_cast<double>(k + 1), n));
        }
      }
    }
    if (!(ao[i]->meanThroughput >= fixedPhase[i]->meanThroughput)) out.fail(fmt("(a) ao < fixedPhase at N=%g", n));
    if (!(fixedPhase[i]->meanThroughput >= noIrs[i]->meanThroughput)) out.fail(fmt("(a) fixedPhase < noIrs at N=%g", n));
  }
  if (out.pass) {
    std::string d = fmt("%g drops; ao R:", def.summary.front().drops);
    for (const auto* s : ao) d += fmt(" %.4f", s->meanThroughput);
    d += " tau0:";
    for (const auto* s : ao) d += fmt(" %.4f", s->meanTau0);
    out.detail = d;
  }
  return out;
}

Outcome criterion8() {
  Outcome out;
  Rng rng(8);
  std::uniform_int_distribution<int> dim(2, 33);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int d = dim(rng);
    ComplexMatrix c(d, d);
    if (trial % 2 == 0) {
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) c(i, j) = numerics::standard_complex_normal(rng);
      }
      c = 0.5 * (c + c.adjoint()).eval();
    } else {
      // PSD weights of low rank, the shape produced by the joint optimizer.
      c = ComplexMatrix::Zero(d, d);
      for (int r = 0; r < 1 + trial % 5; ++r) {
        const ComplexVector a = random_vector(d, rng);
        c += a * a.adjoint();
      }
    }
    try {
      const auto r = solve_unit_diag_sdp(c, 1e-6, 50000);
      worst = std::max(worst, r.dualityGap);
      if (!(r.dualityGap <= 1e-6)) out.fail(fmt("trial %g: gap %.3e", trial, r.dualityGap));
    } catch (const SdpError& e) {
      out.fail(fmt("trial %g (d=%g): ", trial, d) + e.what());
    }
  }
  double worstRankOne = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial;
    const ComplexVector a = random_vector(d, rng);
    const double expected = std::pow(a.cwiseAbs().sum(), 2);
    const auto r = solve_unit_diag_sdp(a * a.adjoint(), 1e-6 * expected, 50000);
    const double err = rel(r.primalValue, expected);
    worstRankOne = std::max(worstRankOne, err);
    if (err > 1e-6) out.fail(fmt("rank-one d=%g: relative error %.3e", d, err));
  }
  if (out.pass) out.detail = fmt("worst gap %.3e; worst rank-one error %.3e", worst, worstRankOne);
  return out;
}

Outcome criterion9() {
  Outcome out;
  const fs::path root = fs::temp_directory_path() / "irswpcn_acceptance_determinism";
  fs::remove_all(root);
  const std::vector<std::pair<std::string, std::string>> runs = {
      {"a", "--threads 1"}, {"b", "--threads 1"}, {"c", "--threads 4"}, {"d", "--threads 0"}};
  for (const auto& [name, flags] : runs) {
    const int code = run_cli("run --drops 20 --seed 7 " + flags + " --out " + (root / name).string());
    if (code != 0) out.fail("run " + name + " exited with " + std::to_string(code));
  }
  for (const char* file : {"results.csv", "summary.csv"}) {
    const std::string ref = slurp(root / "a" / file);
    if (ref.empty()) out.fail(std::string(file) + " missing");
    for (const char* other : {"b", "c", "d"}) {
      if (slurp(root / other / file) != ref) out.fail(std::string(file) + " differs in run " + other);
    }
  }
  if (out.pass) out.detail = "4 CLI runs (threads 1, 1, 4, auto) byte-identical results.csv and summary.csv";
  fs::remove_all(root);
  return out;
}

}  // namespace

int main() {
  int failures = 0;
  const auto report = [&](int id, const std::function<Outcome()>& check) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %d: %s (%.1fs) %s\n", id, o.pass ? "PASS" : "FAIL", secs, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  };
  report(1, criterion1);
  report(2, criterion2);
  report(3, criterion3);
  report(4, criterion4);
  report(5, criterion5);
  ExperimentResult def;
  try {
    def = default_experiment();
  } catch (const std::exception& e) {
    std::printf("default experiment failed: %s\n", e.what());
  }
  report(6, [&] { return criterion6(def); });
  report(7, [&] { return criterion7(def); });
  report(8, criterion8);
  report(9, criterion9);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
