#include "pbmc/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "pbmc/generators.hpp"
#include "pbmc/opb.hpp"
#include "pbmc/oracle.hpp"

namespace pbmc {

namespace {

using nlohmann::json;

std::string hex(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

json configJson(const CounterConfig& c) {
  return {{"heuristic", c.heuristic == Heuristic::Vcis ? "vcis" : "baseline"},
          {"cache_saturation", c.cacheSaturation},
          {"vcis_static_only", c.vcisStaticOnly},
          {"seed", c.seed}};
}

json statsJson(const CounterStats& s) {
  return {{"decisions", s.decisions},
          {"conflicts", s.conflicts},
          {"learned", s.engine.learned},
          {"propagations", s.engine.propagations},
          {"components", s.components},
          {"peak_frames", s.maxFrames},
          {"fixed_by_preprocess", s.fixedByPreprocess},
          {"trace", hex(s.traceHash)},
          {"cache",
           {{"entries", s.cache.entries},
            {"hits", s.cache.hits},
            {"misses", s.cache.misses},
            {"stores", s.cache.stores},
            {"evictions", s.cache.evictions},
            {"invalidated", s.cache.invalidated},
            {"bytes", s.cache.bytes},
            {"peak_bytes", s.cache.peakBytes}}}};
}

void addConfigOptions(CLI::App* cmd, CounterConfig& config, std::string& heuristic, bool& noSaturation) {
  cmd->add_option("--heuristic", heuristic, "Decision heuristic")
      ->check(CLI::IsMember({"vcis", "baseline"}))
      ->envname("PBMC_HEURISTIC");
  cmd->add_flag("--no-cache-saturation", noSaturation, "Record exact gaps in cache keys")
      ->envname("PBMC_NO_CACHE_SATURATION");
  cmd->add_flag("--vcis-static-only", config.vcisStaticOnly, "Order decisions by the static score alone")
      ->envname("PBMC_VCIS_STATIC_ONLY");
  cmd->add_option("--seed", config.seed, "Seed for cache eviction")->envname("PBMC_SEED");
  cmd->add_option("--cache-bytes", config.cacheBytes, "Cache byte budget")->envname("PBMC_CACHE_BYTES");
  cmd->add_option("--learned-cap", config.learnedCap, "Maximum number of learned constraints")
      ->envname("PBMC_LEARNED_CAP");
}

void applyConfig(CounterConfig& config, const std::string& heuristic, bool noSaturation) {
  config.heuristic = heuristic == "baseline" ? Heuristic::Baseline : Heuristic::Vcis;
  config.cacheSaturation = !noSaturation;
}

bool load(const std::string& path, PBFormula& f, std::ostream& err) {
  try {
    f = parseOpbFile(path);
    return true;
  } catch (const ParseError& e) {
    err << "c parse error: " << path << ": " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "c error: " << e.what() << "\n";
  }
  return false;
}

int writeOutput(const std::string& text, const std::string& outPath, std::ostream& out, std::ostream& err) {
  if (outPath.empty()) {
    out << text;
    return kExitOk;
  }
  std::ofstream file(outPath, std::ios::binary);
  file << text;
  if (!file) {
    err << "c error: cannot write " << outPath << "\n";
    return kExitFail;
  }
  return kExitOk;
}

}  // namespace

int cmdCount(const std::string& path, const CounterConfig& config, bool stats, std::ostream& out, std::ostream& err) {
  json report;
  report["config"] = configJson(config);
  auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };

  PBFormula f;
  if (!load(path, f, err)) {
    report["status"] = "parse-error";
    out << "c report " << report.dump() << "\n";
    return kExitParse;
  }
  report["vars"] = f.numVars;
  report["constraints"] = f.constraints.size();

  int code = kExitOk;
  try {
    Counter counter(f, config);
    CountResult r = counter.run();
    report["status"] = r.trivialUnsat ? "unsat-trivial" : "counted";
    report["count"] = toDecimal(r.count);
    report["stats"] = statsJson(r.stats);
    out << "s mc " << toDecimal(r.count) << "\n";
    if (stats) {
      err << "c decisions " << r.stats.decisions << "\n"
          << "c conflicts " << r.stats.conflicts << "\n"
          << "c cache hits " << r.stats.cache.hits << " misses " << r.stats.cache.misses << " entries "
          << r.stats.cache.entries << " evictions " << r.stats.cache.evictions << " bytes " << r.stats.cache.bytes
          << "\n";
    }
  } catch (const TimeoutError&) {
    report["status"] = "timeout";
    err << "c time limit reached\n";
    code = kExitTimeout;
  } catch (const MemoutError&) {
    report["status"] = "memout";
    err << "c memory limit reached\n";
    code = kExitMemout;
  } catch (const std::bad_alloc&) {
    report["status"] = "memout";
    err << "c out of memory\n";
    code = kExitMemout;
  }
  report["time_s"] = elapsed();
  out << "c report " << report.dump() << "\n";
  return code;
}

int cmdVerify(const std::string& path, const CounterConfig& base, std::ostream& out, std::ostream& err) {
  PBFormula f;
  if (!load(path, f, err)) return kExitParse;
  if (f.numVars > 24) {
    err << "c verify refuses " << f.numVars << " variables (limit 24)\n";
    return kExitRefused;
  }
  std::vector<std::pair<std::string, ModelCount>> results;
  for (Heuristic h : {Heuristic::Vcis, Heuristic::Baseline}) {
    for (bool sat : {true, false}) {
      CounterConfig c = base;
      c.heuristic = h;
      c.cacheSaturation = sat;
      std::string name = std::string(h == Heuristic::Vcis ? "vcis" : "baseline") + (sat ? "+sat" : "-sat");
      results.emplace_back(name, countPBMC(f, c));
    }
  }
  ModelCount brute = bruteCount(f).count;
  bool pass = true;
  for (const auto& [name, count] : results) {
    out << "c " << std::left << std::setw(13) << name << " " << toDecimal(count) << "\n";
    if (count != brute) pass = false;
  }
  out << "c " << std::left << std::setw(13) << "brute" << " " << toDecimal(brute) << "\n";
  out << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? kExitOk : kExitFail;
}

int runCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact pseudo-Boolean model counter", "pbmc"};
  app.require_subcommand(1);

  CounterConfig countConfig;
  std::string countPath, countHeuristic = "vcis";
  bool countNoSat = false, stats = false;
  double timeout = 0;
  std::uint64_t memMiB = 0;
  auto* count = app.add_subcommand("count", "Count the models of an OPB instance");
  count->add_option("file", countPath, "OPB file")->required();
  addConfigOptions(count, countConfig, countHeuristic, countNoSat);
  count->add_option("--timeout", timeout, "Time limit in seconds")->check(CLI::NonNegativeNumber)->envname("PBMC_TIMEOUT");
  count->add_option("--mem", memMiB, "Memory limit in MiB")->envname("PBMC_MEM");
  count->add_flag("--stats", stats, "Print search statistics to stderr")->envname("PBMC_STATS");

  CounterConfig verifyConfig;
  std::string verifyPath, verifyHeuristic = "vcis";
  bool verifyNoSat = false;
  auto* verify = app.add_subcommand("verify", "Check every configuration against brute force");
  verify->add_option("file", verifyPath, "OPB file")->required();
  addConfigOptions(verify, verifyConfig, verifyHeuristic, verifyNoSat);
  verify->add_flag("--corrupt-cache", verifyConfig.corruptCacheForTesting)->group("");

  auto* generate = app.add_subcommand("generate", "Write a benchmark instance");
  generate->require_subcommand(1);
  std::string outPath;
  auto addOut = [&](CLI::App* cmd) { cmd->add_option("--out", outPath, "Output file (default: stdout)"); };

  KnapsackSpec ks;
  auto* knap = generate->add_subcommand("knapsack", "Multi-dimensional knapsack");
  knap->add_option("--items", ks.items)->check(CLI::PositiveNumber);
  knap->add_option("--dims", ks.dims)->check(CLI::PositiveNumber);
  knap->add_option("--max-coeff", ks.maxCoeff)->check(CLI::PositiveNumber);
  knap->add_option("--capacity", ks.capacityFraction)->check(CLI::Range(0.0, 1.0));
  knap->add_option("--seed", ks.seed);
  addOut(knap);

  AuctionSpec as;
  auto* auc = generate->add_subcommand("auction", "Combinatorial auction");
  auc->add_option("--bids", as.bids)->check(CLI::PositiveNumber);
  auc->add_option("--items", as.items)->check(CLI::PositiveNumber);
  auc->add_option("--max-bundle", as.maxBundle)->check(CLI::PositiveNumber);
  auc->add_option("--max-price", as.maxPrice)->check(CLI::PositiveNumber);
  auc->add_option("--revenue", as.revenueFraction)->check(CLI::NonNegativeNumber);
  auc->add_option("--seed", as.seed);
  addOut(auc);

  SensorSpec ss;
  bool costAware = false;
  auto addSensor = [&](const char* name, const char* desc, bool cost) {
    auto* s = generate->add_subcommand(name, desc);
    s->add_option("--grid", ss.grid)->check(CLI::PositiveNumber);
    s->add_option("--sensors", ss.sensors)->check(CLI::PositiveNumber);
    s->add_option("--targets", ss.targets)->check(CLI::PositiveNumber);
    s->add_option("--radius", ss.radius);
    s->add_option("--seed", ss.seed);
    addOut(s);
    if (cost) {
      s->add_option("--max-cost", ss.maxCost)->check(CLI::PositiveNumber);
      s->add_option("--budget", ss.budgetFraction)->check(CLI::Range(0.0, 1.0));
      s->add_option("--redundancy", ss.redundancy)->check(CLI::Range(0.0, 1.0));
    } else {
      s->add_option("--budget", ss.budget, "Number of sensors allowed (default: half)");
    }
    s->callback([&costAware, cost] { costAware = cost; });
  };
  addSensor("sensor", "Sensor placement", false);
  addSensor("sensor-cost", "Sensor placement with placement costs", true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "c usage error: " << e.what() << "\n";
    return kExitFail;
  }

  if (count->parsed()) {
    applyConfig(countConfig, countHeuristic, countNoSat);
    countConfig.timeoutSeconds = timeout;
    countConfig.memLimitBytes = memMiB << 20;
    return cmdCount(countPath, countConfig, stats, out, err);
  }
  if (verify->parsed()) {
    applyConfig(verifyConfig, verifyHeuristic, verifyNoSat);
    return cmdVerify(verifyPath, verifyConfig, out, err);
  }
  if (knap->parsed()) return writeOutput(genKnapsack(ks), outPath, out, err);
  if (auc->parsed()) return writeOutput(genAuction(as), outPath, out, err);
  return writeOutput(genSensor(ss, costAware), outPath, out, err);
}

}  // namespace pbmc
