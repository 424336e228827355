#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pbmc/formula.hpp"

namespace pbmc {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// One constraint line exactly as written, before normalization.
struct RawConstraint {
  std::vector<RawTerm> terms;
  Relation relation = Relation::GreaterEq;
  Coef degree = 0;
  std::size_t line = 0;
};

struct RawOpb {
  std::uint32_t declaredVars = 0;  // from "#variable=", 0 if absent
  std::uint32_t maxVar = 0;
  std::vector<RawConstraint> constraints;
};

/// Reads OPB text without normalizing it. Objective lines ("min:"/"max:")
/// are skipped; nonlinear terms are rejected.
RawOpb parseOpbRaw(std::string_view text);

PBFormula parseOpb(std::string_view text);
PBFormula parseOpbFile(const std::string& path);

/// Writes a normalized formula as OPB, one `>=` line per constraint.
void emitOpb(const PBFormula& f, std::ostream& os);
std::string emitOpb(const PBFormula& f);

}  // namespace pbmc
