#include "irswpcn/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <thread>
#include <tuple>

namespace irswpcn {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::joSdr: return "joSdr";
    case Scheme::joGr: return "joGr";
    case Scheme::joPenalty: return "joPenalty";
    case Scheme::ao: return "ao";
    case Scheme::fixedTime: return "fixedTime";
    case Scheme::fixedPhase: return "fixedPhase";
    case Scheme::noIrs: return "noIrs";
  }
  return "unknown";
}

const std::vector<Scheme>& all_schemes() {
  static const std::vector<Scheme> schemes{Scheme::joSdr,     Scheme::joGr,       Scheme::joPenalty, Scheme::ao,
                                           Scheme::fixedTime, Scheme::fixedPhase, Scheme::noIrs};
  return schemes;
}

Scheme parse_scheme(std::string_view name) {
  for (const Scheme s : all_schemes()) {
    if (to_string(s) == name) return s;
  }
  throw ArgumentError("unknown scheme '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
  if (drops < 1) throw ArgumentError("config: drops must be >= 1");
  if (nValues.empty()) throw ArgumentError("config: nValues must not be empty");
  if (kValues.empty()) throw ArgumentError("config: kValues must not be empty");
  if (schemes.empty()) throw ArgumentError("config: schemes must not be empty");
  for (const int n : nValues) {
    if (n < 0 || n > 127) throw ArgumentError("config: every N must lie in [0, 127]");
  }
  for (const int k : kValues) {
    if (k < 1) throw ArgumentError("config: every K must be >= 1");
  }
  if (std::set<int>(nValues.begin(), nValues.end()).size() != nValues.size()) {
    throw ArgumentError("config: nValues contains duplicates");
  }
  if (std::set<int>(kValues.begin(), kValues.end()).size() != kValues.size()) {
    throw ArgumentError("config: kValues contains duplicates");
  }
  if (std::set<Scheme>(schemes.begin(), schemes.end()).size() != schemes.size()) {
    throw ArgumentError("config: schemes contains duplicates");
  }
  params.validate();
  solvers.ao.validate();
  solvers.jo.validate();
}

// ---------------------------------------------------------------- config I/O

namespace {

double watt_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

json point_json(const Point3& p) { return json::array({p.x, p.y, p.z}); }

Point3 point_from(const json& j, const char* key) {
  if (!j.is_array() || j.size() != 3) throw ArgumentError(std::string("config: ") + key + " must be [x, y, z]");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const char* where) {
  if (!obj.is_object()) throw ArgumentError(std::string("config: ") + where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw ArgumentError(std::string("config: unknown key '") + key + "' in " + where);
    }
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

json params_json(const SystemParams& p) {
  return {{"hapPowerDbm", watt_to_dbm(p.hapPower)},
          {"noisePowerDbm", watt_to_dbm(p.noisePower)},
          {"totalTime", p.totalTime},
          {"efficiency", p.efficiency},
          {"hapPos", point_json(p.hapPos)},
          {"irsPos", point_json(p.irsPos)},
          {"userCenter", point_json(p.userCenter)},
          {"userRadius", p.userRadius},
          {"plExpHapIrs", p.plExpHapIrs},
          {"plExpIrsUser", p.plExpIrsUser},
          {"plExpHapUser", p.plExpHapUser},
          {"refAttenuationDb", p.refAttenuationDb}};
}

SystemParams params_from(const json& j) {
  reject_unknown(j,
                 {"hapPowerDbm", "noisePowerDbm", "totalTime", "efficiency", "hapPos", "irsPos", "userCenter",
                  "userRadius", "plExpHapIrs", "plExpIrsUser", "plExpHapUser", "refAttenuationDb"},
                 "params");
  SystemParams p;
  if (j.contains("hapPowerDbm")) p.hapPower = dbm_to_watt(j.at("hapPowerDbm").get<double>());
  if (j.contains("noisePowerDbm")) p.noisePower = dbm_to_watt(j.at("noisePowerDbm").get<double>());
  read(j, "totalTime", p.totalTime);
  if (j.contains("efficiency")) {
    const json& e = j.at("efficiency");
    if (e.is_number()) {
      p.efficiency.assign(p.efficiency.size(), e.get<double>());
    } else {
      p.efficiency = e.get<std::vector<double>>();
      if (p.efficiency.empty()) throw ArgumentError("config: efficiency must not be empty");
    }
  }
  if (j.contains("hapPos")) p.hapPos = point_from(j.at("hapPos"), "hapPos");
  if (j.contains("irsPos")) p.irsPos = point_from(j.at("irsPos"), "irsPos");
  if (j.contains("userCenter")) p.userCenter = point_from(j.at("userCenter"), "userCenter");
  read(j, "userRadius", p.userRadius);
  read(j, "plExpHapIrs", p.plExpHapIrs);
  read(j, "plExpIrsUser", p.plExpIrsUser);
  read(j, "plExpHapUser", p.plExpHapUser);
  read(j, "refAttenuationDb", p.refAttenuationDb);
  return p;
}

json ao_json(const AoConfig& c) {
  return {{"maxOuterIters", c.maxOuterIters},     {"objectiveTol", c.objectiveTol},
          {"scaInnerIters", c.scaInnerIters},     {"initStrategy", std::string(to_string(c.initStrategy))},
          {"randomRestarts", c.randomRestarts},   {"seed", c.seed}};
}

AoConfig ao_from(const json& j) {
  reject_unknown(j, {"maxOuterIters", "objectiveTol", "scaInnerIters", "initStrategy", "randomRestarts", "seed"},
                 "ao");
  AoConfig c;
  read(j, "maxOuterIters", c.maxOuterIters);
  read(j, "objectiveTol", c.objectiveTol);
  read(j, "scaInnerIters", c.scaInnerIters);
  if (j.contains("initStrategy")) c.initStrategy = parse_init_strategy(j.at("initStrategy").get<std::string>());
  read(j, "randomRestarts", c.randomRestarts);
  read(j, "seed", c.seed);
  return c;
}

json jo_json(const JoConfig& c) {
  return {{"scaMaxIters", c.scaMaxIters},
          {"scaTol", c.scaTol},
          {"randomizationCount", c.randomizationCount},
          {"penaltyInitialRho", c.penaltyInitialRho},
          {"penaltyGrowth", c.penaltyGrowth},
          {"penaltyRankTol", c.penaltyRankTol},
          {"penaltyMaxIters", c.penaltyMaxIters},
          {"tau0GridPoints", c.tau0GridPoints},
          {"sdpTol", c.sdpTol},
          {"sdpMaxIters", c.sdpMaxIters},
          {"boundRefinements", c.boundRefinements},
          {"seed", c.seed}};
}

JoConfig jo_from(const json& j) {
  reject_unknown(j,
                 {"scaMaxIters", "scaTol", "randomizationCount", "penaltyInitialRho", "penaltyGrowth",
                  "penaltyRankTol", "penaltyMaxIters", "tau0GridPoints", "sdpTol", "sdpMaxIters",
                  "boundRefinements", "seed"},
                 "jo");
  JoConfig c;
  read(j, "scaMaxIters", c.scaMaxIters);
  read(j, "scaTol", c.scaTol);
  read(j, "randomizationCount", c.randomizationCount);
  read(j, "penaltyInitialRho", c.penaltyInitialRho);
  read(j, "penaltyGrowth", c.penaltyGrowth);
  read(j, "penaltyRankTol", c.penaltyRankTol);
  read(j, "penaltyMaxIters", c.penaltyMaxIters);
  read(j, "tau0GridPoints", c.tau0GridPoints);
  read(j, "sdpTol", c.sdpTol);
  read(j, "sdpMaxIters", c.sdpMaxIters);
  read(j, "boundRefinements", c.boundRefinements);
  read(j, "seed", c.seed);
  return c;
}

}  // namespace

json to_json(const ExperimentConfig& cfg) {
  json schemes = json::array();
  for (const Scheme s : cfg.schemes) schemes.push_back(std::string(to_string(s)));
  return {{"params", params_json(cfg.params)},
          {"nValues", cfg.nValues},
          {"kValues", cfg.kValues},
          {"schemes", schemes},
          {"drops", cfg.drops},
          {"baseSeed", cfg.baseSeed},
          {"outputDir", cfg.outputDir},
          {"threads", cfg.threads},
          {"ao", ao_json(cfg.solvers.ao)},
          {"jo", jo_json(cfg.solvers.jo)}};
}

ExperimentConfig experiment_config_from_json(const json& doc) {
  try {
    reject_unknown(doc, {"params", "nValues", "kValues", "schemes", "drops", "baseSeed", "outputDir", "threads", "ao", "jo"},
                   "the top level");
    ExperimentConfig cfg;
    if (doc.contains("params")) cfg.params = params_from(doc.at("params"));
    read(doc, "nValues", cfg.nValues);
    read(doc, "kValues", cfg.kValues);
    if (doc.contains("schemes")) {
      cfg.schemes.clear();
      for (const auto& s : doc.at("schemes")) cfg.schemes.push_back(parse_scheme(s.get<std::string>()));
    }
    read(doc, "drops", cfg.drops);
    read(doc, "baseSeed", cfg.baseSeed);
    read(doc, "outputDir", cfg.outputDir);
    read(doc, "threads", cfg.threads);
    if (doc.contains("ao")) cfg.solvers.ao = ao_from(doc.at("ao"));
    if (doc.contains("jo")) cfg.solvers.jo = jo_from(doc.at("jo"));
    // The scenario size comes from nValues / kValues; keep params consistent with the first K.
    cfg.params = cfg.params.with_size(cfg.kValues.empty() ? cfg.params.numDevices : cfg.kValues.front(),
                                      cfg.nValues.empty() ? cfg.params.numElements : cfg.nValues.front());
    return cfg;
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("config: ") + e.what());
  }
}

ExperimentConfig load_experiment_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw OutputError("cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ArgumentError("config: " + path.string() + " is not valid JSON: " + e.what());
  }
  return experiment_config_from_json(doc);
}

// ----------------------------------------------------------------- schemes

SchemeResultRow make_row(Scheme scheme, const ResourceSolution& sol, const ChannelRealization& real) {
  SchemeResultRow row;
  row.scheme = scheme;
  row.N = real.num_elements();
  row.K = real.num_devices();
  row.dropSeed = real.seed();
  row.sumThroughput = sol.sumThroughput;
  row.tau0 = sol.time.tau0;
  row.tau1 = sol.time.tau1;
  row.hapEnergy = sol.hapEnergy;
  row.harvestedEnergy = sol.harvestedEnergy;
  row.iterations = sol.iterations;
  return row;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

ResourceSolution solve_fixed_time(const ChannelRealization& real, const SystemParams& params, const AoConfig& cfg) {
  const TimeAllocation half{0.5 * params.totalTime, 0.5 * params.totalTime};
  const auto alphas = sca_weights(half, params);
  Rng rng(cfg.seed ^ real.seed());
  int iterations = 0;
  const PhaseVector v = maximize_phases(real, alphas, initial_phases(real, cfg.initStrategy, rng), cfg.scaInnerIters,
                                        cfg.objectiveTol, &iterations);
  ResourceSolution sol = make_solution(real, v, half, params);
  sol.iterations = iterations;
  return sol;
}

ResourceSolution solve_single(Scheme scheme, const ChannelRealization& real, const SystemParams& params,
                              const SolverConfigs& cfgs) {
  switch (scheme) {
    case Scheme::ao: return solve_ao(real, params, cfgs.ao);
    case Scheme::fixedTime: return solve_fixed_time(real, params, cfgs.ao);
    case Scheme::fixedPhase: return evaluate_phases(real, PhaseVector::ones(real.num_elements()), params);
    case Scheme::noIrs: return evaluate_phases(real.without_irs(), PhaseVector::ones(0), params);
    case Scheme::joSdr: return solve_jo(real, params, cfgs.jo, JoMode::sdrBound);
    case Scheme::joGr: return solve_jo(real, params, cfgs.jo, JoMode::gaussianRounding);
    case Scheme::joPenalty: return solve_jo(real, params, cfgs.jo, JoMode::penalty);
  }
  throw ArgumentError("unknown scheme");
}

std::string context(Scheme scheme, const ChannelRealization& real) {
  return "scheme " + std::string(to_string(scheme)) + ", N=" + std::to_string(real.num_elements()) +
         ", K=" + std::to_string(real.num_devices()) + ", drop seed " + std::to_string(real.seed());
}

bool is_jo(Scheme s) { return s == Scheme::joSdr || s == Scheme::joGr || s == Scheme::joPenalty; }

}  // namespace

SchemeResultRow run_scheme(Scheme scheme, const ChannelRealization& real, const SystemParams& params,
                           const SolverConfigs& cfgs) {
  const auto start = Clock::now();
  try {
    SchemeResultRow row = make_row(scheme, solve_single(scheme, real, params, cfgs), real);
    row.wallTime = seconds_since(start);
    return row;
  } catch (const ArgumentError&) {
    throw;
  } catch (const std::exception& e) {
    throw SolverError(context(scheme, real) + ": " + e.what());
  }
}

std::vector<SchemeResultRow> run_schemes(const std::vector<Scheme>& schemes, const ChannelRealization& real,
                                         const SystemParams& params, const SolverConfigs& cfgs) {
  std::vector<SchemeResultRow> rows;
  const bool anyJo = std::any_of(schemes.begin(), schemes.end(), is_jo);
  std::optional<JoOutcome> jo;
  double joTime = 0.0;
  if (anyJo) {
    JoConfig joCfg = cfgs.jo;
    joCfg.warmStart = cfgs.ao;
    const auto start = Clock::now();
    try {
      jo = solve_jo_all(real, params, joCfg);
    } catch (const ArgumentError&) {
      throw;
    } catch (const std::exception& e) {
      throw SolverError(context(Scheme::joSdr, real) + ": " + e.what());
    }
    joTime = seconds_since(start);
  }
  for (const Scheme s : schemes) {
    if (jo && (is_jo(s) || s == Scheme::ao)) {
      const ResourceSolution& sol = s == Scheme::joSdr  ? jo->sdr
                                    : s == Scheme::joGr ? jo->rounded
                                    : s == Scheme::joPenalty ? jo->penalty
                                                             : jo->ao;
      SchemeResultRow row = make_row(s, sol, real);
      row.wallTime = joTime;
      rows.push_back(std::move(row));
    } else {
      rows.push_back(run_scheme(s, real, params, cfgs));
    }
  }
  return rows;
}

// ------------------------------------------------------------------ summary

std::vector<SummaryRow> summarize(const std::vector<SchemeResultRow>& rows) {
  std::vector<SummaryRow> out;
  std::size_t i = 0;
  const auto mean_std = [](const std::vector<double>& xs) {
    double mean = 0.0;
    for (const double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double var = 0.0;
    for (const double x : xs) var += (x - mean) * (x - mean);
    const double sd = xs.size() > 1 ? std::sqrt(var / static_cast<double>(xs.size() - 1)) : 0.0;
    return std::pair{mean, sd};
  };
  while (i < rows.size()) {
    std::size_t j = i;
    while (j < rows.size() && rows[j].scheme == rows[i].scheme && rows[j].N == rows[i].N && rows[j].K == rows[i].K) ++j;
    SummaryRow s;
    s.scheme = rows[i].scheme;
    s.N = rows[i].N;
    s.K = rows[i].K;
    s.drops = static_cast<int>(j - i);
    std::vector<double> rate, tau0, hap;
    std::vector<std::vector<double>> energy(static_cast<std::size_t>(s.K));
    for (std::size_t r = i; r < j; ++r) {
      rate.push_back(rows[r].sumThroughput);
      tau0.push_back(rows[r].tau0);
      hap.push_back(rows[r].hapEnergy);
      for (std::size_t k = 0; k < energy.size() && k < rows[r].harvestedEnergy.size(); ++k) {
        energy[k].push_back(rows[r].harvestedEnergy[k]);
      }
    }
    std::tie(s.meanThroughput, s.stdThroughput) = mean_std(rate);
    std::tie(s.meanTau0, s.stdTau0) = mean_std(tau0);
    std::tie(s.meanHapEnergy, s.stdHapEnergy) = mean_std(hap);
    for (const auto& e : energy) {
      const auto [m, sd] = e.empty() ? std::pair{0.0, 0.0} : mean_std(e);
      s.meanEnergy.push_back(m);
      s.stdEnergy.push_back(sd);
    }
    out.push_back(std::move(s));
    i = j;
  }
  return out;
}

// ------------------------------------------------------------------ writers

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw OutputError("cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw OutputError("error while writing " + path.string());
}

int max_devices(const std::vector<SchemeResultRow>& rows) {
  int k = 0;
  for (const auto& r : rows) k = std::max(k, r.K);
  return k;
}

}  // namespace

void write_results_csv(const fs::path& path, const std::vector<SchemeResultRow>& rows) {
  auto out = open_out(path);
  const int kMax = max_devices(rows);
  out << "scheme,N,K,dropSeed,sumThroughput,tau0,tau1,hapEnergy";
  for (int k = 1; k <= kMax; ++k) out << ",energy_k" << k;
  out << ",iterations\n";
  for (const auto& r : rows) {
    out << to_string(r.scheme) << ',' << r.N << ',' << r.K << ',' << r.dropSeed << ',' << num(r.sumThroughput) << ','
        << num(r.tau0) << ',' << num(r.tau1) << ',' << num(r.hapEnergy);
    for (int k = 0; k < kMax; ++k) {
      out << ',';
      if (k < static_cast<int>(r.harvestedEnergy.size())) out << num(r.harvestedEnergy[static_cast<std::size_t>(k)]);
    }
    out << ',' << r.iterations << '\n';
  }
  finish(out, path);
}

void write_timings_csv(const fs::path& path, const std::vector<SchemeResultRow>& rows) {
  auto out = open_out(path);
  out << "scheme,N,K,dropSeed,wallTime\n";
  for (const auto& r : rows) {
    out << to_string(r.scheme) << ',' << r.N << ',' << r.K << ',' << r.dropSeed << ',' << num(r.wallTime) << '\n';
  }
  finish(out, path);
}

void write_summary_csv(const fs::path& path, const std::vector<SummaryRow>& summary) {
  auto out = open_out(path);
  int kMax = 0;
  for (const auto& s : summary) kMax = std::max(kMax, s.K);
  out << "scheme,N,K,drops,mean_sumThroughput,std_sumThroughput,mean_tau0,std_tau0,mean_hapEnergy,std_hapEnergy";
  for (int k = 1; k <= kMax; ++k) out << ",mean_energy_k" << k << ",std_energy_k" << k;
  out << '\n';
  for (const auto& s : summary) {
    out << to_string(s.scheme) << ',' << s.N << ',' << s.K << ',' << s.drops << ',' << num(s.meanThroughput) << ','
        << num(s.stdThroughput) << ',' << num(s.meanTau0) << ',' << num(s.stdTau0) << ',' << num(s.meanHapEnergy)
        << ',' << num(s.stdHapEnergy);
    for (int k = 0; k < kMax; ++k) {
      if (k < static_cast<int>(s.meanEnergy.size())) {
        out << ',' << num(s.meanEnergy[static_cast<std::size_t>(k)]) << ','
            << num(s.stdEnergy[static_cast<std::size_t>(k)]);
      } else {
        out << ",,";
      }
    }
    out << '\n';
  }
  finish(out, path);
}

// One file per panel and K: rows are N, columns are schemes.
void write_panels(const fs::path& dir, const std::vector<SummaryRow>& summary) {
  std::set<int> ks;
  std::set<int> ns;
  std::vector<Scheme> schemes;
  std::map<std::tuple<Scheme, int, int>, const SummaryRow*> index;
  for (const auto& s : summary) {
    ks.insert(s.K);
    ns.insert(s.N);
    if (std::find(schemes.begin(), schemes.end(), s.scheme) == schemes.end()) schemes.push_back(s.scheme);
    index[{s.scheme, s.N, s.K}] = &s;
  }
  const auto cell = [&](Scheme sc, int n, int k, auto get) {
    const auto it = index.find({sc, n, k});
    return it == index.end() ? std::string("nan") : num(get(*it->second));
  };
  for (const int k : ks) {
    const std::string suffix = "_K" + std::to_string(k) + ".dat";

    const fs::path pa = dir / ("panel_a_throughput" + suffix);
    auto a = open_out(pa);
    a << "# mean sum throughput [bits/Hz] vs N\n# N";
    for (const Scheme sc : schemes) a << ' ' << to_string(sc);
    a << '\n';
    for (const int n : ns) {
      a << n;
      for (const Scheme sc : schemes) a << ' ' << cell(sc, n, k, [](const SummaryRow& s) { return s.meanThroughput; });
      a << '\n';
    }
    finish(a, pa);

    const fs::path pb = dir / ("panel_b_tau0" + suffix);
    auto b = open_out(pb);
    b << "# mean WPT duration tau0 [s] and HAP energy [J] vs N\n# N";
    for (const Scheme sc : schemes) b << ' ' << to_string(sc) << "_tau0 " << to_string(sc) << "_hapEnergy";
    b << '\n';
    for (const int n : ns) {
      b << n;
      for (const Scheme sc : schemes) {
        b << ' ' << cell(sc, n, k, [](const SummaryRow& s) { return s.meanTau0; }) << ' '
          << cell(sc, n, k, [](const SummaryRow& s) { return s.meanHapEnergy; });
      }
      b << '\n';
    }
    finish(b, pb);

    const fs::path pc = dir / ("panel_c_energy" + suffix);
    auto c = open_out(pc);
    c << "# mean harvested energy per device [J] vs N\n# N";
    for (const Scheme sc : schemes) {
      for (int dev = 1; dev <= k; ++dev) c << ' ' << to_string(sc) << "_k" << dev;
    }
    c << '\n';
    for (const int n : ns) {
      c << n;
      for (const Scheme sc : schemes) {
        for (int dev = 0; dev < k; ++dev) {
          c << ' ' << cell(sc, n, k, [dev](const SummaryRow& s) {
            return dev < static_cast<int>(s.meanEnergy.size()) ? s.meanEnergy[static_cast<std::size_t>(dev)] : NAN;
          });
        }
      }
      c << '\n';
    }
    finish(c, pc);
  }
}

// --------------------------------------------------------------- experiment

namespace {

void prepare_output(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw OutputError("cannot create output directory " + dir.string());
  const fs::path probe = dir / ".write_probe";
  {
    std::ofstream out(probe);
    if (!out || !(out << "ok") || !out.flush()) throw OutputError("output directory " + dir.string() + " is not writable");
  }
  fs::remove(probe, ec);
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const bool writeFiles = !cfg.outputDir.empty();
  if (writeFiles) prepare_output(cfg.outputDir);

  struct Item {
    int n;
    int k;
    std::uint64_t seed;
  };
  std::vector<Item> items;
  for (const int k : cfg.kValues) {
    for (const int n : cfg.nValues) {
      for (int d = 0; d < cfg.drops; ++d) items.push_back({n, k, cfg.baseSeed + static_cast<std::uint64_t>(d)});
    }
  }

  std::vector<std::vector<SchemeResultRow>> perItem(items.size());
  std::vector<std::exception_ptr> errors(items.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < items.size(); i = next++) {
      try {
        const SystemParams params = cfg.params.with_size(items[i].k, items[i].n);
        const ChannelRealization real = generate_drop(params, items[i].seed);
        perItem[i] = run_schemes(cfg.schemes, real, params, cfg.solvers);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  unsigned threads = cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(items.size(), 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  // Report the failure of the first work item so the message is reproducible.
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  ExperimentResult result;
  for (auto& rows : perItem) {
    for (auto& r : rows) result.rows.push_back(std::move(r));
  }
  std::sort(result.rows.begin(), result.rows.end(), [](const SchemeResultRow& a, const SchemeResultRow& b) {
    return std::tuple(static_cast<int>(a.scheme), a.N, a.K, a.dropSeed) <
           std::tuple(static_cast<int>(b.scheme), b.N, b.K, b.dropSeed);
  });
  result.summary = summarize(result.rows);

  if (writeFiles) {
    const fs::path dir = cfg.outputDir;
    write_results_csv(dir / "results.csv", result.rows);
    write_summary_csv(dir / "summary.csv", result.summary);
    write_timings_csv(dir / "timings.csv", result.rows);
    write_panels(dir, result.summary);
    std::ofstream used(dir / "config_used.json", std::ios::binary | std::ios::trunc);
    used << to_json(cfg).dump(2) << '\n';
    if (!used) throw OutputError("cannot write " + (dir / "config_used.json").string());
  }
  return result;
}

}  // namespace irswpcn
