#include "pbmc/constraint.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <sstream>

namespace pbmc {

namespace {

using Wide = __int128;

constexpr Wide kCoefMax = std::numeric_limits<Coef>::max();
constexpr Wide kCoefMin = std::numeric_limits<Coef>::min();

Coef narrow(Wide v, const char* what) {
  if (v > kCoefMax || v < kCoefMin) throw OverflowError(std::string("64-bit overflow in ") + what);
  return static_cast<Coef>(v);
}

// Normalizes sum(terms) >= degree where terms carry signed coefficients.
void normalizeGeq(std::span<const RawTerm> terms, Wide degree, NormalizeResult& out) {
  // Per-variable coefficient of the positive literal; x~ contributes
  // a*(1 - x).
  std::map<Var, Wide> byVar;
  for (const RawTerm& t : terms) {
    if (t.lit.negated()) {
      byVar[t.lit.var()] -= t.coef;
      degree -= t.coef;
    } else {
      byVar[t.lit.var()] += t.coef;
    }
  }

  PBConstraint c;
  std::vector<Wide> coefs;
  for (auto [v, a] : byVar) {
    if (a == 0) continue;
    if (a > 0) {
      c.terms.push_back({0, posLit(v)});
      coefs.push_back(a);
    } else {
      c.terms.push_back({0, negLit(v)});
      coefs.push_back(-a);
      degree -= a;
    }
  }
  if (degree <= 0) return;  // trivially true

  c.degree = narrow(degree, "constraint degree");
  Wide sum = 0;
  for (std::size_t i = 0; i < c.terms.size(); ++i) {
    c.terms[i].coef = narrow(std::min(coefs[i], degree), "coefficient");
    sum += c.terms[i].coef;
  }
  narrow(sum, "coefficient sum");
  if (sum < degree) out.unsat = true;
  out.constraints.push_back(std::move(c));
}

}  // namespace

bool PBConstraint::isClausal() const {
  if (degree != 1) return false;
  return std::all_of(terms.begin(), terms.end(), [](const Term& t) { return t.coef == 1; });
}

Coef PBConstraint::coefSum() const {
  Coef sum = 0;
  for (const Term& t : terms) sum += t.coef;
  return sum;
}

NormalizeResult normalize(std::span<const RawTerm> terms, Relation rel, Coef degree) {
  NormalizeResult out;
  if (rel == Relation::GreaterEq || rel == Relation::Equal) normalizeGeq(terms, degree, out);
  if (rel == Relation::LessEq || rel == Relation::Equal) {
    std::vector<RawTerm> negated(terms.begin(), terms.end());
    for (RawTerm& t : negated) t.coef = narrow(-static_cast<Wide>(t.coef), "negated coefficient");
    normalizeGeq(negated, -static_cast<Wide>(degree), out);
  }
  return out;
}

Coef gap(const PBConstraint& c, const Assignment& sigma) {
  Coef g = c.degree;
  for (const Term& t : c.terms)
    if (sigma.isTrue(t.lit)) g -= t.coef;
  return g;
}

Coef slack(const PBConstraint& c, const Assignment& sigma) {
  Coef s = -c.degree;
  for (const Term& t : c.terms)
    if (!sigma.isFalse(t.lit)) s += t.coef;
  return s;
}

std::string toString(const PBConstraint& c) {
  std::ostringstream os;
  for (const Term& t : c.terms) os << '+' << t.coef << ' ' << toString(t.lit) << ' ';
  os << ">= " << c.degree << " ;";
  return os.str();
}

}  // namespace pbmc
