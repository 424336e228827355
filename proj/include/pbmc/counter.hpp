#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>

#include "pbmc/cache.hpp"
#include "pbmc/components.hpp"
#include "pbmc/engine.hpp"
#include "pbmc/heuristics.hpp"
#include "pbmc/model_count.hpp"

namespace pbmc {

struct CounterConfig {
  Heuristic heuristic = Heuristic::Vcis;
  bool cacheSaturation = true;
  bool vcisStaticOnly = false;
  bool preprocess = true;
  std::uint64_t cacheBytes = std::uint64_t{4} << 30;
  std::size_t learnedCap = 10000;
  std::uint64_t seed = 0;
  double timeoutSeconds = 0;      // 0: none
  std::uint64_t memLimitBytes = 0;  // 0: none
  bool corruptCacheForTesting = false;
};

class TimeoutError : public std::runtime_error {
 public:
  TimeoutError() : std::runtime_error("time limit exceeded") {}
};

class MemoutError : public std::runtime_error {
 public:
  MemoutError() : std::runtime_error("memory limit exceeded") {}
};

struct CounterStats {
  std::uint64_t decisions = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t components = 0;  // components entered (cache lookups)
  std::uint64_t maxFrames = 0;
  std::uint64_t fixedByPreprocess = 0;
  /// FNV-1a over the decision literals in order.
  std::uint64_t traceHash = 14695981039346656037ull;
  CacheStats cache;
  EngineStats engine;
};

struct CountResult {
  ModelCount count;
  /// Unsatisfiability was found before any search.
  bool trivialUnsat = false;
  CounterStats stats;
};

/// Called after each conflict once the trail has been cut back to the level
/// below the conflict, with the learned constraint already added.
using LearnedHook = std::function<void(const Engine&, const AnalysisResult&)>;

/// Exact model counter: propagation and constraint learning over an
/// explicit stack of branch and product frames, with component caching.
class Counter {
 public:
  explicit Counter(const PBFormula& f, CounterConfig config = {});
  ~Counter();

  void setLearnedHook(LearnedHook hook) { hook_ = std::move(hook); }

  /// Runs the count. Throws TimeoutError / MemoutError on resource limits.
  CountResult run();

 private:
  struct Frame;

  void enter(Component scope);
  void enterComponent(Component comp);
  void takeBranch();
  void branchDone(ModelCount value);
  void productChildDone(ModelCount value);
  void handleConflict(CRef conflict);
  void step();
  void checkLimits();

  const PBFormula& input_;
  CounterConfig config_;
  LearnedHook hook_;

  PBFormula formula_;
  std::unique_ptr<Engine> engine_;
  std::unique_ptr<ComponentSplitter> splitter_;
  std::unique_ptr<BranchHeuristic> heuristic_;
  std::unique_ptr<CountCache> cache_;
  std::vector<Frame> stack_;

  std::optional<ModelCount> ret_;
  std::optional<CRef> conflict_;
  bool topLevelConflict_ = false;

  CounterStats stats_;
  std::uint64_t steps_ = 0;
  std::chrono::steady_clock::time_point start_;
};

ModelCount countPBMC(const PBFormula& f, const CounterConfig& config = {});

}  // namespace pbmc
