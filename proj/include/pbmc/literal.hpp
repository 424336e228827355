#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace pbmc {

/// Variable index. Variables of a formula with n variables are 1..n.
using Var = std::uint32_t;

/// A variable or its negation, packed as 2*var + sign.
class Lit {
 public:
  constexpr Lit() = default;
  constexpr Lit(Var v, bool negated) : code_(2 * v + (negated ? 1u : 0u)) {}

  static constexpr Lit fromCode(std::uint32_t code) {
    Lit l;
    l.code_ = code;
    return l;
  }

  constexpr Var var() const { return code_ >> 1; }
  constexpr bool negated() const { return (code_ & 1u) != 0; }
  constexpr std::uint32_t code() const { return code_; }

  constexpr Lit operator~() const { return fromCode(code_ ^ 1u); }

  friend constexpr bool operator==(Lit, Lit) = default;
  friend constexpr auto operator<=>(Lit, Lit) = default;

 private:
  std::uint32_t code_ = 0;
};

constexpr Lit posLit(Var v) { return Lit(v, false); }
constexpr Lit negLit(Var v) { return Lit(v, true); }

/// OPB spelling: "x3" or "~x3".
inline std::string toString(Lit l) {
  return (l.negated() ? "~x" : "x") + std::to_string(l.var());
}

}  // namespace pbmc
