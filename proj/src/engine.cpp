#include "pbmc/engine.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <numeric>

namespace pbmc {

namespace {

using Wide = __int128;

// Intermediate coefficients above this fall back to the decision clause.
constexpr Wide kCoefLimit = Wide(1) << 62;

constexpr double kVarDecay = 0.98;
constexpr double kClaDecay = 0.999;

void sortByCoefDesc(PBConstraint& c) {
  std::stable_sort(c.terms.begin(), c.terms.end(),
                   [](const Term& a, const Term& b) { return a.coef > b.coef; });
}

Wide ceilDiv(Wide a, Wide b) { return (a + b - 1) / b; }

// Dense working constraint for conflict analysis. The coefficient of
// variable v is signed: positive for x_v, negative for ~x_v.
class WorkConstraint {
 public:
  void reset(std::uint32_t numVars) {
    if (coef_.size() < numVars + 1) {
      coef_.assign(numVars + 1, 0);
      present_.assign(numVars + 1, false);
    }
    for (Var v : vars_) {
      coef_[v] = 0;
      present_[v] = false;
    }
    vars_.clear();
    degree_ = 0;
    overflow_ = false;
  }

  Wide coefOf(Lit l) const {
    Wide c = coef_[l.var()];
    if (l.negated()) return c < 0 ? -c : 0;
    return c > 0 ? c : 0;
  }

  void addTerm(Wide a, Lit l) {
    Var v = l.var();
    if (!present_[v]) {
      present_[v] = true;
      vars_.push_back(v);
    }
    Wide cur = coef_[v];
    Wide add = l.negated() ? -a : a;
    if (cur != 0 && (cur > 0) != (add > 0)) {
      // a*l + b*~l = min(a,b) + |a-b| * (heavier literal)
      Wide absCur = cur < 0 ? -cur : cur;
      degree_ -= std::min(absCur, a);
    }
    coef_[v] = cur + add;
    if (coef_[v] > kCoefLimit || coef_[v] < -kCoefLimit) overflow_ = true;
  }

  void addConstraint(const std::vector<Term>& terms, Wide degree, Wide mult) {
    for (const Term& t : terms) addTerm(mult * t.coef, t.lit);
    degree_ += mult * degree;
    if (degree_ > kCoefLimit) overflow_ = true;
  }

  void saturate() {
    for (Var v : vars_) {
      if (coef_[v] > degree_) coef_[v] = degree_;
      if (coef_[v] < -degree_) coef_[v] = -degree_;
    }
  }

  std::vector<Term> terms() const {
    std::vector<Term> out;
    for (Var v : vars_) {
      Wide c = coef_[v];
      if (c > 0) out.push_back({static_cast<Coef>(c), posLit(v)});
      if (c < 0) out.push_back({static_cast<Coef>(-c), negLit(v)});
    }
    return out;
  }

  Wide degree() const { return degree_; }
  bool overflow() const { return overflow_ || degree_ > kCoefLimit; }

  PBConstraint toConstraint() const {
    PBConstraint c;
    c.terms = terms();
    std::sort(c.terms.begin(), c.terms.end(), [](const Term& a, const Term& b) { return a.lit < b.lit; });
    c.degree = static_cast<Coef>(degree_);
    return c;
  }

 private:
  std::vector<Wide> coef_;
  std::vector<bool> present_;
  std::vector<Var> vars_;
  Wide degree_ = 0;
  bool overflow_ = false;
};

}  // namespace

Engine::Engine(const PBFormula& formula, std::size_t learnedCap)
    : numVars_(formula.numVars), numOriginal_(formula.constraints.size()), learnedCap_(learnedCap) {
  values_.assign(numVars_ + 1, -1);
  varLevel_.assign(numVars_ + 1, -1);
  reason_.assign(numVars_ + 1, kNoReason);
  trailPos_.assign(numVars_ + 1, 0);
  savedPhase_.assign(numVars_ + 1, false);
  activity_.assign(numVars_ + 1, 0.0);
  occ_.resize(2 * (numVars_ + 1));
  fixpointBirth_.assign(1, 0);

  cons_.reserve(formula.constraints.size());
  for (const PBConstraint& c : formula.constraints) {
    Stored s;
    s.body = c;
    sortByCoefDesc(s.body);
    s.slack = c.coefSum() - c.degree;
    cons_.push_back(std::move(s));
  }
  queued_.assign(cons_.size(), false);
  for (CRef c = 0; c < static_cast<CRef>(cons_.size()); ++c) {
    attach(c);
    toCheck_.push_back(c);
    queued_[c] = true;
  }
  std::reverse(toCheck_.begin(), toCheck_.end());
}

void Engine::attach(CRef c) {
  for (const Term& t : cons_[c].body.terms) occ_[t.lit.code()].push_back({c, t.coef});
}

void Engine::assign(Lit l, CRef reason) {
  Var v = l.var();
  assert(values_[v] < 0);
  values_[v] = l.negated() ? 0 : 1;
  varLevel_[v] = level();
  reason_[v] = reason;
  trailPos_[v] = static_cast<std::uint32_t>(trail_.size());
  savedPhase_[v] = !l.negated();
  trail_.push_back({l, level(), reason});
  for (const Occ& o : occ_[(~l).code()]) cons_[o.cref].slack -= o.coef;
  if (reason != kNoReason) ++stats_.propagations;
}

void Engine::decide(Lit l) {
  assert(!assigned(l.var()) && "decision on an assigned variable");
  levelStart_.push_back(trail_.size());
  fixpointBirth_.resize(levelStart_.size() + 1, 0);
  fixpointBirth_[level()] = 0;
  assign(l, kNoReason);
}

std::optional<CRef> Engine::check(CRef c) {
  const Stored& s = cons_[c];
  if (s.slack < 0) return c;
  for (const Term& t : s.body.terms) {
    if (t.coef <= s.slack) break;
    if (!assigned(t.lit.var())) assign(t.lit, c);
  }
  return std::nullopt;
}

std::optional<CRef> Engine::propagate() {
  for (;;) {
    while (!toCheck_.empty()) {
      CRef c = toCheck_.back();
      toCheck_.pop_back();
      queued_[c] = false;
      if (auto confl = check(c)) {
        ++stats_.conflicts;
        return confl;
      }
    }
    if (qhead_ == trail_.size()) break;
    Lit falsified = ~trail_[qhead_++].lit;
    // Index loop: assignments made by check() only touch other lists.
    const auto& list = occ_[falsified.code()];
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (auto confl = check(list[i].cref)) {
        ++stats_.conflicts;
        return confl;
      }
    }
  }
  fixpointBirth_[level()] = births_;
  return std::nullopt;
}

void Engine::backjump(int target) {
  assert(target >= 0 && target <= level());
  if (target < level()) {
    std::size_t keep = levelStart_[target];
    while (trail_.size() > keep) {
      Lit l = trail_.back().lit;
      Var v = l.var();
      for (const Occ& o : occ_[(~l).code()]) cons_[o.cref].slack += o.coef;
      values_[v] = -1;
      varLevel_[v] = -1;
      reason_[v] = kNoReason;
      trail_.pop_back();
    }
    levelStart_.resize(target);
  }
  qhead_ = trail_.size();
  for (CRef c : toCheck_) queued_[c] = false;
  toCheck_.clear();
  // Learned constraints newer than this level's last fixpoint may propagate
  // here now.
  std::uint64_t stamp = fixpointBirth_[target];
  for (std::size_t i = cons_.size(); i > numOriginal_; --i) {
    CRef c = static_cast<CRef>(i - 1);
    if (cons_[c].birth <= stamp) break;
    toCheck_.push_back(c);
    queued_[c] = true;
  }
  fixpointBirth_.resize(target + 1);
  if (onBackjump_) onBackjump_(target);
}

std::optional<int> Engine::falsifiedLevel(const PBConstraint& c) const {
  Wide slackAll = -static_cast<Wide>(c.degree);
  std::vector<std::pair<int, Coef>> falseAt;
  for (const Term& t : c.terms) {
    slackAll += t.coef;
    if (isFalse(t.lit)) falseAt.emplace_back(levelOf(t.lit.var()), t.coef);
  }
  std::sort(falseAt.begin(), falseAt.end());
  Wide s = slackAll;
  if (s < 0) return 0;
  for (std::size_t i = 0; i < falseAt.size();) {
    int lvl = falseAt[i].first;
    while (i < falseAt.size() && falseAt[i].first == lvl) s -= falseAt[i++].second;
    if (s < 0) return lvl;
  }
  return std::nullopt;
}

namespace {

enum class Status { Asserting, FalsifiedBelow, None };

}  // namespace

PBConstraint Engine::decisionClause(int upToLevel) const {
  PBConstraint c;
  for (int l = 1; l <= upToLevel; ++l) c.terms.push_back({1, ~trail_[levelStart_[l - 1]].lit});
  std::sort(c.terms.begin(), c.terms.end(), [](const Term& a, const Term& b) { return a.lit < b.lit; });
  c.degree = 1;
  return c;
}

AnalysisResult Engine::analyze(CRef conflict) {
  AnalysisResult res;
  auto lvlOpt = falsifiedLevel(cons_[conflict].body);
  assert(lvlOpt && "analyze called on a non-conflicting constraint");
  int lc = lvlOpt.value_or(level());
  if (lc == 0) return res;

  static thread_local WorkConstraint work;
  work.reset(numVars_);
  work.addConstraint(cons_[conflict].body.terms, cons_[conflict].body.degree, 1);
  if (isLearned(conflict)) cons_[conflict].activity += claInc_;

  auto isFalseBelow = [&](Lit l, int lvl) { return isFalse(l) && levelOf(l.var()) < lvl; };

  // Assertion status of the working constraint once level lc is retracted.
  auto status = [&]() {
    Wide s = -work.degree();
    Wide maxOpen = 0;
    for (const Term& t : work.terms()) {
      if (!isFalseBelow(t.lit, lc)) s += t.coef;
      if (!assigned(t.lit.var()) || levelOf(t.lit.var()) >= lc) maxOpen = std::max<Wide>(maxOpen, t.coef);
    }
    if (s < 0) return Status::FalsifiedBelow;
    return maxOpen > s ? Status::Asserting : Status::None;
  };

  bool fallback = false;
  for (std::size_t pos = trail_.size(); pos-- > 0;) {
    const TrailEntry& e = trail_[pos];
    if (e.level > lc) continue;
    Lit l = e.lit;
    Wide m = work.coefOf(~l);
    if (m == 0) continue;

    Status st = status();
    if (st == Status::Asserting) break;
    if (st == Status::FalsifiedBelow) {
      PBConstraint cur = work.toConstraint();
      lc = falsifiedLevel(cur).value_or(0);
      if (lc == 0) return res;
      continue;
    }
    CRef r = e.reason;
    if (r == kNoReason) {
      fallback = true;  // not reachable for a well-formed conflict
      break;
    }
    if (isLearned(r)) cons_[r].activity += claInc_;

    // Weaken the reason on every literal not falsified before l, then divide
    // by l's coefficient with rounding up.
    const PBConstraint& reason = cons_[r].body;
    Coef div = 0;
    Wide deg = reason.degree;
    std::vector<Term> kept;
    for (const Term& t : reason.terms) {
      if (t.lit == l) {
        div = t.coef;
        kept.push_back(t);
      } else if (isFalse(t.lit) && trailPos_[t.lit.var()] < pos) {
        kept.push_back(t);
      } else {
        deg -= t.coef;
      }
    }
    assert(div > 0 && deg > 0);
    for (Term& t : kept) t.coef = static_cast<Coef>(ceilDiv(t.coef, div));
    Wide reducedDeg = ceilDiv(deg, div);

    work.addConstraint(kept, reducedDeg, m);
    work.saturate();
    if (work.overflow()) {
      fallback = true;
      break;
    }
    assert(work.coefOf(~l) == 0 && work.coefOf(l) == 0);
  }

  if (!fallback && status() != Status::Asserting) fallback = true;

  for (const Term& t : work.terms()) bumpVar(t.lit.var());
  varInc_ /= kVarDecay;
  claInc_ /= kClaDecay;

  res.kind = AnalysisResult::Kind::Learned;
  res.conflictLevel = lc;
  if (fallback) {
    ++stats_.fallbacks;
    res.clausalFallback = true;
    res.learned = decisionClause(lc);
    res.backjumpLevel = lc - 1;
    return res;
  }
  res.learned = work.toConstraint();

  // Lowest level where the learned constraint propagates: candidates are 0
  // and the levels of its assigned literals below lc.
  const auto& terms = res.learned.terms;
  std::vector<int> candidates{0};
  for (const Term& t : terms)
    if (assigned(t.lit.var()) && levelOf(t.lit.var()) < lc) candidates.push_back(levelOf(t.lit.var()));
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  res.backjumpLevel = lc - 1;
  for (int lvl : candidates) {
    Wide s = -static_cast<Wide>(res.learned.degree);
    Wide maxOpen = 0;
    for (const Term& t : terms) {
      bool open = !assigned(t.lit.var()) || levelOf(t.lit.var()) > lvl;
      if (!(isFalse(t.lit) && !open)) s += t.coef;
      if (open) maxOpen = std::max<Wide>(maxOpen, t.coef);
    }
    if (s >= 0 && maxOpen > s) {
      res.backjumpLevel = lvl;
      break;
    }
  }
  return res;
}

void Engine::bumpVar(Var v) {
  activity_[v] += varInc_;
  if (activity_[v] > 1e100) {
    for (double& a : activity_) a *= 1e-100;
    varInc_ *= 1e-100;
  }
}

CRef Engine::learn(PBConstraint c) {
  Stored s;
  s.body = std::move(c);
  s.body.id = static_cast<std::uint32_t>(cons_.size());
  sortByCoefDesc(s.body);
  s.slack = -s.body.degree;
  for (const Term& t : s.body.terms)
    if (!isFalse(t.lit)) s.slack += t.coef;
  s.activity = claInc_;
  s.birth = ++births_;
  CRef ref = static_cast<CRef>(cons_.size());
  cons_.push_back(std::move(s));
  queued_.push_back(true);
  attach(ref);
  toCheck_.push_back(ref);
  ++stats_.learned;

  if (numLearned() > learnedCap_) {
    reduceLearned();
    ref = static_cast<CRef>(cons_.size() - 1);  // the newest is always kept
  }
  return ref;
}

void Engine::reduceLearned() {
  std::vector<bool> locked(cons_.size(), false);
  for (const TrailEntry& e : trail_)
    if (e.reason != kNoReason) locked[e.reason] = true;
  locked.back() = true;

  std::vector<CRef> candidates;
  for (std::size_t i = numOriginal_; i < cons_.size(); ++i)
    if (!locked[i]) candidates.push_back(static_cast<CRef>(i));
  std::sort(candidates.begin(), candidates.end(), [&](CRef a, CRef b) {
    if (cons_[a].activity != cons_[b].activity) return cons_[a].activity < cons_[b].activity;
    return cons_[a].birth < cons_[b].birth;
  });
  std::size_t toDelete = std::min(candidates.size(), numLearned() / 2);
  std::vector<bool> drop(cons_.size(), false);
  for (std::size_t i = 0; i < toDelete; ++i) drop[candidates[i]] = true;

  std::vector<CRef> remap(cons_.size(), kNoReason);
  std::vector<Stored> kept;
  kept.reserve(cons_.size() - toDelete);
  for (std::size_t i = 0; i < cons_.size(); ++i) {
    if (drop[i]) continue;
    remap[i] = static_cast<CRef>(kept.size());
    kept.push_back(std::move(cons_[i]));
  }
  cons_ = std::move(kept);
  for (TrailEntry& e : trail_) {
    if (e.reason == kNoReason) continue;
    e.reason = remap[e.reason];
    reason_[e.lit.var()] = e.reason;
  }
  std::vector<CRef> pending;
  for (CRef c : toCheck_)
    if (remap[c] != kNoReason) pending.push_back(remap[c]);
  toCheck_ = std::move(pending);
  queued_.assign(cons_.size(), false);
  for (CRef c : toCheck_) queued_[c] = true;
  stats_.deleted += toDelete;
  rebuildOccurrences();
}

void Engine::rebuildOccurrences() {
  for (auto& list : occ_) list.clear();
  for (CRef c = 0; c < static_cast<CRef>(cons_.size()); ++c) attach(c);
}

}  // namespace pbmc
