#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pbmc/formula.hpp"

namespace pbmc {

/// A residual subproblem: unassigned variables plus the not-yet-satisfied
/// original constraints over them, with their current gaps. A component with
/// no constraints groups free variables.
struct Component {
  std::vector<Var> vars;                 // ascending
  std::vector<std::uint32_t> cstrs;      // ascending, original ids only
  std::vector<Coef> gaps;                // aligned with cstrs, all > 0
  std::vector<Coef> minOpenCoef;         // smallest unassigned coefficient per constraint

  bool isFree() const { return cstrs.empty(); }
  friend bool operator==(const Component&, const Component&) = default;
};

/// Splits residual formulas into variable-disjoint components.
class ComponentSplitter {
 public:
  explicit ComponentSplitter(const PBFormula& formula);

  /// Components of `scope` under the given variable values (-1/0/1 per var).
  /// Connected components come first, ordered by smallest variable; free
  /// variables, if any, are grouped into one trailing component.
  std::vector<Component> split(const Component& scope, std::span<const std::int8_t> values);

  /// Whole formula as a scope over every variable not listed in `fixed`.
  Component rootScope(std::span<const Var> fixed = {}) const;

 private:
  Var find(Var v);

  const PBFormula& formula_;
  std::vector<Var> parent_;
  std::vector<std::uint64_t> stamp_;
  std::vector<std::int32_t> compOf_;
  std::uint64_t epoch_ = 0;
};

/// Compressed component fingerprint.
struct CacheKey {
  std::string bytes;
  friend bool operator==(const CacheKey&, const CacheKey&) = default;
};

struct CacheKeyHash {
  std::size_t operator()(const CacheKey& k) const { return std::hash<std::string>{}(k.bytes); }
};

/// First id followed by successive differences.
std::vector<std::uint32_t> deltaEncode(std::span<const std::uint32_t> ids);

/// Unsigned LEB128.
void appendVarint(std::string& out, std::uint64_t v);

/// Gap value used in the key. A gap below every unassigned coefficient is
/// raised to the smallest one: any single true literal satisfies it either way.
Coef saturateGap(Coef gap, std::span<const Coef> unassignedCoeffs);
inline Coef saturateGap(Coef gap, Coef minUnassignedCoef) {
  return (gap > 0 && gap < minUnassignedCoef) ? minUnassignedCoef : gap;
}

/// Key layout: |vars|, first var, deltas; |cstrs|, first id, deltas; then
/// gap-1 for every non-clausal constraint. All fields are varints.
CacheKey encodeComponent(const Component& c, const PBFormula& formula, bool saturate);

struct DecodedKey {
  std::vector<Var> vars;
  std::vector<std::uint32_t> cstrs;
  std::vector<Coef> recordedGaps;  // non-clausal constraints only, as gaps
};

/// Inverse of encodeComponent (saturated gaps stay saturated).
DecodedKey decodeComponentKey(const CacheKey& key, const PBFormula& formula);

}  // namespace pbmc
