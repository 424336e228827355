#pragma once

#include <cstdint>
#include <vector>

#include "pbmc/constraint.hpp"

namespace pbmc {

/// Conjunction of normalized constraints over variables 1..numVars.
/// Constraint ids equal their index in `constraints`.
struct PBFormula {
  std::uint32_t numVars = 0;
  std::vector<PBConstraint> constraints;
  /// Some constraint cannot be satisfied at all (coefficient sum < degree).
  bool unsat = false;

  /// Appends normalized constraints, assigning ids and growing numVars to
  /// cover every referenced variable.
  void add(NormalizeResult normalized);
  void add(PBConstraint c);

  /// Convenience for tests and generators: normalize and append.
  void add(std::span<const RawTerm> terms, Relation rel, Coef degree) {
    add(normalize(terms, rel, degree));
  }

  bool satisfiedBy(const Assignment& total) const;
};

}  // namespace pbmc
