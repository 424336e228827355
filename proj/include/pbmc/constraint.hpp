#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pbmc/literal.hpp"

namespace pbmc {

using Coef = std::int64_t;

class OverflowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Term {
  Coef coef = 0;
  Lit lit;

  friend bool operator==(const Term&, const Term&) = default;
};

/// Normalized constraint: sum of coef*lit >= degree with every coef > 0,
/// no variable repeated, every coef <= degree.
struct PBConstraint {
  std::uint32_t id = 0;
  std::vector<Term> terms;
  Coef degree = 0;

  /// All coefficients and the degree equal 1, i.e. an ordinary clause.
  bool isClausal() const;
  Coef coefSum() const;
  bool sameBody(const PBConstraint& other) const {
    return degree == other.degree && terms == other.terms;
  }
};

enum class Relation { GreaterEq, Equal, LessEq };

/// A term as written in the input: the coefficient may be negative.
struct RawTerm {
  Coef coef = 0;
  Lit lit;
};

struct NormalizeResult {
  std::vector<PBConstraint> constraints;
  /// Set when some emitted constraint has coefficient sum below its degree.
  bool unsat = false;
};

/// Rewrites one input constraint into `>=` constraints with positive,
/// merged and saturated coefficients. `=` yields two constraints, trivially
/// true ones are dropped. Throws OverflowError if a merged value leaves the
/// 64-bit range.
NormalizeResult normalize(std::span<const RawTerm> terms, Relation rel, Coef degree);

/// Partial assignment indexed by variable.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::uint32_t numVars) : values_(numVars + 1, -1) {}

  std::uint32_t numVars() const { return values_.empty() ? 0 : static_cast<std::uint32_t>(values_.size() - 1); }
  void set(Var v, bool value) { values_.at(v) = value ? 1 : 0; }
  void unset(Var v) { values_.at(v) = -1; }
  bool assigned(Var v) const { return values_.at(v) >= 0; }
  std::optional<bool> value(Var v) const {
    if (values_.at(v) < 0) return std::nullopt;
    return values_[v] == 1;
  }
  bool isTrue(Lit l) const { return values_.at(l.var()) == (l.negated() ? 0 : 1); }
  bool isFalse(Lit l) const { return values_.at(l.var()) == (l.negated() ? 1 : 0); }

  /// Per-variable values (-1 unassigned, 0 false, 1 true), index 0 unused.
  std::span<const std::int8_t> values() const { return values_; }

 private:
  std::vector<std::int8_t> values_;
};

/// degree minus the coefficients of literals true under sigma.
Coef gap(const PBConstraint& c, const Assignment& sigma);

/// Coefficients of literals not false under sigma, minus degree. Negative
/// means no extension of sigma satisfies c.
Coef slack(const PBConstraint& c, const Assignment& sigma);

std::string toString(const PBConstraint& c);

}  // namespace pbmc
