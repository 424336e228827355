#include "pbmc/formula.hpp"

#include <algorithm>

namespace pbmc {

void PBFormula::add(PBConstraint c) {
  c.id = static_cast<std::uint32_t>(constraints.size());
  for (const Term& t : c.terms) numVars = std::max(numVars, t.lit.var());
  if (c.coefSum() < c.degree) unsat = true;
  constraints.push_back(std::move(c));
}

void PBFormula::add(NormalizeResult normalized) {
  for (PBConstraint& c : normalized.constraints) add(std::move(c));
  if (normalized.unsat) unsat = true;
}

bool PBFormula::satisfiedBy(const Assignment& total) const {
  return std::all_of(constraints.begin(), constraints.end(),
                     [&](const PBConstraint& c) { return gap(c, total) <= 0; });
}

}  // namespace pbmc
