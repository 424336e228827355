#pragma once

#include <vector>

#include "pbmc/formula.hpp"

namespace pbmc {

struct Preprocessed {
  /// Same numVars as the input; forced variables no longer occur in it.
  PBFormula formula;
  /// Variables fixed by root propagation. They contribute a factor of 1,
  /// so they must be left out of the counting scope.
  std::vector<Var> fixed;
  bool unsat = false;
};

/// Root-level propagation with substitution of forced literals, removal of
/// satisfied constraints and deduplication of identical ones.
Preprocessed preprocess(const PBFormula& f);

}  // namespace pbmc
