#pragma once

#include <vector>

#include "pbmc/components.hpp"
#include "pbmc/engine.hpp"

namespace pbmc {

/// Static per-variable scores: the mean of b/k over the constraints a
/// variable occurs in (either polarity). Index 0 unused.
struct VcisScores {
  std::vector<double> score;
  /// True when the positive literal carries at least as much b/k mass.
  std::vector<bool> positivePhase;
};

VcisScores computeVcisScores(const PBFormula& f);

enum class Heuristic { Vcis, Baseline };

/// Chooses the next decision literal inside a component.
///
/// Vcis: 0.5 * activity + 0.5 * score, both scaled by their maximum over the
/// candidates, in the variable's preferred phase (pure score when
/// staticOnly). Baseline: 0.5 * activity + 0.5 * occurrences in active
/// constraints, same scaling, in the saved phase. Ties go to the smaller id.
class BranchHeuristic {
 public:
  BranchHeuristic(const PBFormula& f, Heuristic kind, bool staticOnly = false);

  Lit pick(const Component& comp, const Engine& engine);

  const VcisScores& scores() const { return scores_; }

 private:
  const PBFormula& formula_;
  Heuristic kind_;
  bool staticOnly_;
  VcisScores scores_;
  std::vector<std::uint32_t> occ_;
};

}  // namespace pbmc
