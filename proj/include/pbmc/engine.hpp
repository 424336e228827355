#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "pbmc/formula.hpp"

namespace pbmc {

/// Index into the engine's constraint store. Original constraints keep their
/// formula id; learned constraints follow.
using CRef = std::int32_t;
inline constexpr CRef kNoReason = -1;

struct TrailEntry {
  Lit lit;
  int level = 0;
  CRef reason = kNoReason;
};

struct AnalysisResult {
  enum class Kind { Learned, TopLevelConflict };
  Kind kind = Kind::TopLevelConflict;
  PBConstraint learned;
  /// Lowest level at which the conflict constraint is already falsified.
  /// Every level above it is infeasible.
  int conflictLevel = 0;
  /// Lowest level at which `learned` propagates.
  int backjumpLevel = 0;
  /// Cutting-planes derivation overflowed; `learned` is the decision clause.
  bool clausalFallback = false;
};

struct EngineStats {
  std::uint64_t propagations = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t learned = 0;
  std::uint64_t deleted = 0;
  std::uint64_t fallbacks = 0;
};

/// Assignment trail with counter-based PB propagation and cutting-planes
/// conflict analysis. Each constraint keeps its slack (sum of coefficients of
/// non-false literals minus degree) up to date as literals are assigned and
/// retracted.
class Engine {
 public:
  explicit Engine(const PBFormula& formula, std::size_t learnedCap = 10000);

  std::uint32_t numVars() const { return numVars_; }
  std::size_t numOriginal() const { return numOriginal_; }
  std::size_t numLearned() const { return cons_.size() - numOriginal_; }
  int level() const { return static_cast<int>(levelStart_.size()); }

  /// -1 unassigned, 0 false, 1 true; index 0 unused.
  std::span<const std::int8_t> values() const { return values_; }
  bool assigned(Var v) const { return values_[v] >= 0; }
  bool isTrue(Lit l) const { return values_[l.var()] == (l.negated() ? 0 : 1); }
  bool isFalse(Lit l) const { return values_[l.var()] == (l.negated() ? 1 : 0); }
  int levelOf(Var v) const { return varLevel_[v]; }
  CRef reasonOf(Var v) const { return reason_[v]; }
  /// Value the variable held when last assigned (false if never).
  bool savedPhase(Var v) const { return savedPhase_[v]; }
  const std::vector<TrailEntry>& trail() const { return trail_; }

  /// Terms sorted by descending coefficient.
  const PBConstraint& constraint(CRef c) const { return cons_[c].body; }
  Coef slackOf(CRef c) const { return cons_[c].slack; }
  bool isLearned(CRef c) const { return static_cast<std::size_t>(c) >= numOriginal_; }

  double activity(Var v) const { return activity_[v]; }
  const EngineStats& stats() const { return stats_; }

  /// Opens a new decision level with `l` as its decision.
  void decide(Lit l);

  /// Runs to fixpoint. Returns the first constraint found with negative slack.
  std::optional<CRef> propagate();

  /// Derives a constraint from a conflict without touching the trail.
  /// Bumps variable and constraint activities.
  AnalysisResult analyze(CRef conflict);

  /// Adds a learned constraint (implied by the formula). Returns its ref.
  /// May delete low-activity learned constraints when over the cap, which
  /// renumbers learned refs.
  CRef learn(PBConstraint c);

  /// Retracts every assignment above `level`.
  void backjump(int level);

  /// Called after every backjump with the target level.
  void setBackjumpListener(std::function<void(int)> listener) { onBackjump_ = std::move(listener); }

  /// Lowest level at which `c` has negative slack under the current trail,
  /// or nullopt if it is not falsified.
  std::optional<int> falsifiedLevel(const PBConstraint& c) const;

 private:
  struct Stored {
    PBConstraint body;
    Coef slack = 0;
    double activity = 0;
    std::uint64_t birth = 0;
  };
  struct Occ {
    CRef cref;
    Coef coef;
  };

  void assign(Lit l, CRef reason);
  void attach(CRef c);
  std::optional<CRef> check(CRef c);
  void reduceLearned();
  void rebuildOccurrences();
  void bumpVar(Var v);
  PBConstraint decisionClause(int upToLevel) const;

  std::uint32_t numVars_;
  std::size_t numOriginal_;
  std::size_t learnedCap_;

  std::vector<Stored> cons_;
  std::vector<std::vector<Occ>> occ_;  // by literal code

  std::vector<std::int8_t> values_;
  std::vector<int> varLevel_;
  std::vector<CRef> reason_;
  std::vector<std::uint32_t> trailPos_;
  std::vector<bool> savedPhase_;
  std::vector<TrailEntry> trail_;
  std::vector<std::size_t> levelStart_;  // trail index where each level begins
  std::size_t qhead_ = 0;

  std::vector<CRef> toCheck_;
  std::vector<bool> queued_;
  // Birth counter of the newest learned constraint known to be at fixpoint
  // at each level (index = level).
  std::vector<std::uint64_t> fixpointBirth_;
  std::uint64_t births_ = 0;

  std::vector<double> activity_;
  double varInc_ = 1.0;
  double claInc_ = 1.0;

  EngineStats stats_;
  std::function<void(int)> onBackjump_;
};

}  // namespace pbmc
