#include "pbmc/counter.hpp"

#include <algorithm>
#include <cassert>
#include <fstream>
#include <unistd.h>

#include "pbmc/preprocess.hpp"

namespace pbmc {

namespace {

constexpr std::uint64_t kCheckInterval = std::uint64_t{1} << 14;

std::uint64_t residentBytes() {
  std::ifstream in("/proc/self/statm");
  std::uint64_t size = 0, resident = 0;
  if (!(in >> size >> resident)) return 0;
  return resident * static_cast<std::uint64_t>(sysconf(_SC_PAGESIZE));
}

}  // namespace

struct Counter::Frame {
  enum class Kind { Product, Branch };
  explicit Frame(Kind k) : kind(k) {}
  Kind kind;

  // Product: children of one split, counted left to right.
  std::vector<Component> children;
  std::size_t next = 0;
  std::size_t trailSize = 0;  // trail length at the split

  // Branch: sum over both phases of one literal.
  Component comp;
  CacheKey key;
  int level0 = 0;  // level when the frame was created
  int branch = -1;
  Lit lit;
  bool decided = false;  // current branch opened a decision level
  std::size_t mark = 0;  // cache journal position when the branch began

  ModelCount acc;  // product so far, or branch sum
};

Counter::Counter(const PBFormula& f, CounterConfig config) : input_(f), config_(config) {}

Counter::~Counter() = default;

ModelCount countPBMC(const PBFormula& f, const CounterConfig& config) { return Counter(f, config).run().count; }

void Counter::step() {
  if (++steps_ % kCheckInterval == 0) checkLimits();
}

void Counter::checkLimits() {
  if (config_.timeoutSeconds > 0) {
    std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start_;
    if (elapsed.count() > config_.timeoutSeconds) throw TimeoutError();
  }
  if (config_.memLimitBytes > 0 && residentBytes() > config_.memLimitBytes) throw MemoutError();
}

CountResult Counter::run() {
  start_ = std::chrono::steady_clock::now();
  CountResult result;

  std::vector<Var> fixed;
  if (config_.preprocess) {
    Preprocessed p = preprocess(input_);
    if (p.unsat) {
      result.trivialUnsat = true;
      return result;
    }
    formula_ = std::move(p.formula);
    fixed = std::move(p.fixed);
    stats_.fixedByPreprocess = fixed.size();
  } else {
    if (input_.unsat) {
      result.trivialUnsat = true;
      return result;
    }
    formula_ = input_;
  }

  std::uint64_t cacheBytes = config_.cacheBytes;
  if (config_.memLimitBytes > 0) cacheBytes = std::min(cacheBytes, config_.memLimitBytes / 4 * 3);
  engine_ = std::make_unique<Engine>(formula_, config_.learnedCap);
  splitter_ = std::make_unique<ComponentSplitter>(formula_);
  heuristic_ = std::make_unique<BranchHeuristic>(formula_, config_.heuristic, config_.vcisStaticOnly);
  cache_ = std::make_unique<CountCache>(cacheBytes, config_.seed);
  cache_->setCorruptForTesting(config_.corruptCacheForTesting);

  auto finish = [&](ModelCount count) {
    result.count = std::move(count);
    stats_.cache = cache_->stats();
    stats_.engine = engine_->stats();
    stats_.conflicts = stats_.engine.conflicts;
    result.stats = stats_;
    return result;
  };

  if (engine_->propagate()) {
    result.trivialUnsat = true;
    return finish(0);
  }

  enter(splitter_->rootScope(fixed));
  for (;;) {
    if (topLevelConflict_) {
      stack_.clear();
      return finish(0);
    }
    if (conflict_) {
      CRef c = *conflict_;
      conflict_.reset();
      handleConflict(c);
      continue;
    }
    assert(ret_ && "every step ends in a value or a conflict");
    ModelCount value = std::move(*ret_);
    ret_.reset();
    if (stack_.empty()) return finish(std::move(value));
    if (stack_.back().kind == Frame::Kind::Product) {
      productChildDone(std::move(value));
    } else {
      branchDone(std::move(value));
    }
  }
}

void Counter::enter(Component scope) {
  std::vector<Component> comps = splitter_->split(scope, engine_->values());
  ModelCount mult = 1;
  if (!comps.empty() && comps.back().isFree()) {
    mult = powerOfTwo(comps.back().vars.size());
    comps.pop_back();
  }
  if (comps.empty()) {
    ret_ = std::move(mult);
    return;
  }
  if (comps.size() == 1 && mult == 1) {
    enterComponent(std::move(comps[0]));
    return;
  }
  Frame fr(Frame::Kind::Product);
  fr.children = std::move(comps);
  fr.next = 1;
  fr.trailSize = engine_->trail().size();
  fr.acc = std::move(mult);
  Component first = fr.children[0];
  stack_.push_back(std::move(fr));
  stats_.maxFrames = std::max<std::uint64_t>(stats_.maxFrames, stack_.size());
  enterComponent(std::move(first));
}

void Counter::enterComponent(Component comp) {
  ++stats_.components;
  CacheKey key = encodeComponent(comp, formula_, config_.cacheSaturation);
  if (const ModelCount* hit = cache_->lookup(key)) {
    step();
    ret_ = *hit;
    return;
  }
  Frame fr(Frame::Kind::Branch);
  fr.lit = heuristic_->pick(comp, *engine_);
  fr.comp = std::move(comp);
  fr.key = std::move(key);
  fr.level0 = engine_->level();
  fr.acc = 0;
  stack_.push_back(std::move(fr));
  stats_.maxFrames = std::max<std::uint64_t>(stats_.maxFrames, stack_.size());
  takeBranch();
}

void Counter::takeBranch() {
  Frame& fr = stack_.back();
  ++fr.branch;
  Lit l = fr.branch == 0 ? fr.lit : ~fr.lit;
  fr.mark = cache_->mark();
  fr.decided = false;
  if (engine_->assigned(l.var())) {
    // Forced since the first branch by a learned constraint.
    if (engine_->isTrue(l)) {
      enter(fr.comp);
    } else {
      ret_ = ModelCount(0);
    }
    return;
  }
  engine_->decide(l);
  fr.decided = true;
  ++stats_.decisions;
  step();
  stats_.traceHash = (stats_.traceHash ^ l.code()) * 1099511628211ull;
  if (auto c = engine_->propagate()) {
    conflict_ = *c;
    return;
  }
  enter(fr.comp);
}

void Counter::branchDone(ModelCount value) {
  Frame& fr = stack_.back();
  // Anything cached under a branch that turned out empty may have been
  // computed under literals implied only by that emptiness.
  if (value == 0) cache_->eraseSince(fr.mark);
  fr.acc += value;
  if (engine_->level() > fr.level0) engine_->backjump(fr.level0);
  fr.decided = false;
  if (fr.branch == 1) {
    cache_->store(fr.key, fr.acc);
    ModelCount total = std::move(fr.acc);
    stack_.pop_back();
    if (auto c = engine_->propagate()) {
      conflict_ = *c;
      return;
    }
    ret_ = std::move(total);
    return;
  }
  if (auto c = engine_->propagate()) {
    conflict_ = *c;
    return;
  }
  takeBranch();
}

void Counter::productChildDone(ModelCount value) {
  Frame& fr = stack_.back();
  if (value == 0) {
    stack_.pop_back();
    ret_ = ModelCount(0);
    return;
  }
  fr.acc *= value;
  if (fr.next == fr.children.size()) {
    ModelCount total = std::move(fr.acc);
    stack_.pop_back();
    ret_ = std::move(total);
    return;
  }
  Component child = std::move(fr.children[fr.next++]);
  if (engine_->trail().size() != fr.trailSize) {
    // Learned constraints propagated at this level meanwhile; the child may
    // have shrunk or fallen apart.
    enter(std::move(child));
  } else {
    enterComponent(std::move(child));
  }
}

void Counter::handleConflict(CRef conflict) {
  step();
  AnalysisResult res = engine_->analyze(conflict);
  if (res.kind == AnalysisResult::Kind::TopLevelConflict) {
    topLevelConflict_ = true;
    return;
  }
  const int cl = res.conflictLevel;
  engine_->learn(res.learned);
  // The branch whose decision opened level cl is empty.
  while (!(stack_.back().kind == Frame::Kind::Branch && stack_.back().decided &&
           stack_.back().level0 + 1 == cl)) {
    stack_.pop_back();
    assert(!stack_.empty() && "no frame owns the conflict level");
  }
  engine_->backjump(cl - 1);
  if (hook_) hook_(*engine_, res);
  branchDone(ModelCount(0));
}

}  // namespace pbmc
