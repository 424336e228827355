#include "pbmc/preprocess.hpp"

#include <set>
#include <utility>

#include "pbmc/engine.hpp"

namespace pbmc {

Preprocessed preprocess(const PBFormula& f) {
  Preprocessed out;
  out.formula.numVars = f.numVars;
  if (f.unsat) {
    out.unsat = true;
    return out;
  }
  Engine engine(f, 0);
  if (engine.propagate()) {
    out.unsat = true;
    return out;
  }
  for (const TrailEntry& e : engine.trail()) out.fixed.push_back(e.lit.var());

  std::set<std::pair<Coef, std::vector<std::pair<std::uint32_t, Coef>>>> seen;
  for (const PBConstraint& c : f.constraints) {
    std::vector<RawTerm> raw;
    Coef degree = c.degree;
    for (const Term& t : c.terms) {
      if (engine.isTrue(t.lit)) {
        degree -= t.coef;
      } else if (!engine.isFalse(t.lit)) {
        raw.push_back({t.coef, t.lit});
      }
    }
    NormalizeResult n = normalize(raw, Relation::GreaterEq, degree);
    if (n.unsat) {
      out.unsat = true;
      return out;
    }
    for (PBConstraint& r : n.constraints) {
      std::vector<std::pair<std::uint32_t, Coef>> body;
      for (const Term& t : r.terms) body.emplace_back(t.lit.code(), t.coef);
      if (!seen.emplace(r.degree, std::move(body)).second) continue;
      out.formula.add(std::move(r));
    }
  }
  out.formula.numVars = f.numVars;
  return out;
}

}  // namespace pbmc
