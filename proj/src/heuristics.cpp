#include "pbmc/heuristics.hpp"

#include <algorithm>
#include <cassert>

namespace pbmc {

VcisScores computeVcisScores(const PBFormula& f) {
  VcisScores s;
  s.score.assign(f.numVars + 1, 0.0);
  s.positivePhase.assign(f.numVars + 1, true);
  std::vector<double> posMass(f.numVars + 1, 0.0), negMass(f.numVars + 1, 0.0);
  std::vector<std::uint32_t> count(f.numVars + 1, 0);
  for (const PBConstraint& c : f.constraints) {
    if (c.degree <= 0) continue;
    const double k = static_cast<double>(c.degree);
    for (const Term& t : c.terms) {
      Var v = t.lit.var();
      double r = static_cast<double>(t.coef) / k;
      s.score[v] += r;
      (t.lit.negated() ? negMass : posMass)[v] += r;
      ++count[v];
    }
  }
  for (Var v = 1; v <= f.numVars; ++v) {
    if (count[v] > 0) s.score[v] /= count[v];
    s.positivePhase[v] = posMass[v] >= negMass[v];
  }
  return s;
}

BranchHeuristic::BranchHeuristic(const PBFormula& f, Heuristic kind, bool staticOnly)
    : formula_(f), kind_(kind), staticOnly_(staticOnly), scores_(computeVcisScores(f)), occ_(f.numVars + 1, 0) {}

Lit BranchHeuristic::pick(const Component& comp, const Engine& engine) {
  assert(!comp.vars.empty());
  const bool vcis = kind_ == Heuristic::Vcis;
  double maxAct = 0, maxOther = 0;
  if (!vcis) {
    for (Var v : comp.vars) occ_[v] = 0;
    for (std::uint32_t cid : comp.cstrs)
      for (const Term& t : formula_.constraints[cid].terms)
        if (!engine.assigned(t.lit.var())) ++occ_[t.lit.var()];
  }
  auto other = [&](Var v) { return vcis ? scores_.score[v] : static_cast<double>(occ_[v]); };
  for (Var v : comp.vars) {
    if (engine.assigned(v)) continue;
    maxAct = std::max(maxAct, engine.activity(v));
    maxOther = std::max(maxOther, other(v));
  }

  Var best = 0;
  double bestScore = -1;
  for (Var v : comp.vars) {
    if (engine.assigned(v)) continue;
    double o = maxOther > 0 ? other(v) / maxOther : 0.0;
    double score;
    if (vcis && staticOnly_) {
      score = o;
    } else {
      double a = maxAct > 0 ? engine.activity(v) / maxAct : 0.0;
      score = 0.5 * a + 0.5 * o;
    }
    // comp.vars is ascending, so strict > keeps the smallest id on ties.
    if (score > bestScore) {
      bestScore = score;
      best = v;
    }
  }
  assert(best != 0);
  bool positive = vcis ? scores_.positivePhase[best] : engine.savedPhase(best);
  return Lit(best, !positive);
}

}  // namespace pbmc
