#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "../support/random_formula.hpp"
#include "pbmc/opb.hpp"

using namespace pbmc;

namespace {

PBConstraint only(const NormalizeResult& r) {
  REQUIRE(r.constraints.size() == 1);
  return r.constraints[0];
}

std::vector<Term> terms(std::initializer_list<std::pair<Coef, Lit>> list) {
  std::vector<Term> out;
  for (auto [a, l] : list) out.push_back({a, l});
  return out;
}

Assignment assign(std::uint32_t n, std::initializer_list<std::pair<Var, bool>> values) {
  Assignment a(n);
  for (auto [v, b] : values) a.set(v, b);
  return a;
}

PBConstraint make(std::initializer_list<std::pair<Coef, Lit>> list, Coef degree) {
  PBConstraint c;
  c.terms = terms(list);
  c.degree = degree;
  return c;
}

}  // namespace

TEST_CASE("literal packing") {
  Lit a(3, false);
  CHECK(a.var() == 3);
  CHECK_FALSE(a.negated());
  CHECK((~a).var() == 3);
  CHECK((~a).negated());
  CHECK((~~a).code() == a.code());
  CHECK(Lit::fromCode(a.code()).code() == a.code());
  CHECK(toString(negLit(4)) == "~x4");
  CHECK(toString(posLit(4)) == "x4");
}

TEST_CASE("normalize: saturation") {
  // 5x1 + 2x2 >= 3 saturates the first coefficient.
  std::vector<RawTerm> raw{{5, posLit(1)}, {2, posLit(2)}};
  PBConstraint c = only(normalize(raw, Relation::GreaterEq, 3));
  CHECK(c.terms == terms({{3, posLit(1)}, {2, posLit(2)}}));
  CHECK(c.degree == 3);
}

TEST_CASE("normalize: <= that becomes trivially true is dropped") {
  std::vector<RawTerm> raw{{2, posLit(1)}, {3, posLit(2)}};
  NormalizeResult r = normalize(raw, Relation::LessEq, 5);
  CHECK(r.constraints.empty());
  CHECK_FALSE(r.unsat);
}

TEST_CASE("normalize: a literal and its negation cancel") {
  std::vector<RawTerm> raw{{1, posLit(1)}, {1, negLit(1)}};
  NormalizeResult r = normalize(raw, Relation::GreaterEq, 1);
  CHECK(r.constraints.empty());
  CHECK_FALSE(r.unsat);
}

TEST_CASE("normalize: negative coefficient flips the literal") {
  std::vector<RawTerm> raw{{-2, posLit(1)}, {3, posLit(2)}};
  PBConstraint c = only(normalize(raw, Relation::GreaterEq, 1));
  CHECK(c.terms == terms({{2, negLit(1)}, {3, posLit(2)}}));
  CHECK(c.degree == 3);
}

TEST_CASE("normalize: equality yields both directions") {
  std::vector<RawTerm> raw{{1, posLit(1)}, {1, posLit(2)}};
  NormalizeResult r = normalize(raw, Relation::Equal, 1);
  REQUIRE(r.constraints.size() == 2);
  CHECK(r.constraints[0].terms == terms({{1, posLit(1)}, {1, posLit(2)}}));
  CHECK(r.constraints[0].degree == 1);
  CHECK(r.constraints[1].terms == terms({{1, negLit(1)}, {1, negLit(2)}}));
  CHECK(r.constraints[1].degree == 1);
}

TEST_CASE("normalize: duplicate literals merge") {
  std::vector<RawTerm> raw{{2, posLit(1)}, {3, posLit(1)}, {1, posLit(2)}};
  PBConstraint c = only(normalize(raw, Relation::GreaterEq, 4));
  CHECK(c.terms == terms({{4, posLit(1)}, {1, posLit(2)}}));
}

TEST_CASE("normalize: unsatisfiable constraint is flagged") {
  std::vector<RawTerm> raw{{1, posLit(1)}, {1, posLit(2)}};
  NormalizeResult r = normalize(raw, Relation::GreaterEq, 3);
  CHECK(r.unsat);
  PBFormula f;
  f.add(raw, Relation::GreaterEq, 3);
  CHECK(f.unsat);
}

TEST_CASE("normalize: overflow is reported") {
  const Coef big = std::numeric_limits<Coef>::max();
  std::vector<RawTerm> raw{{big, posLit(1)}, {big, posLit(2)}};
  CHECK_THROWS_AS(normalize(raw, Relation::GreaterEq, big), OverflowError);
}

TEST_CASE("normalize is model preserving") {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 300; ++round) {
    std::uint32_t n = 1 + rng() % 6;
    std::vector<RawTerm> raw;
    int arity = 1 + rng() % 6;
    for (int i = 0; i < arity; ++i)
      raw.push_back({static_cast<Coef>(rng() % 21) - 10, Lit(1 + rng() % n, rng() % 2 == 0)});
    auto rel = static_cast<Relation>(rng() % 3);
    Coef degree = static_cast<Coef>(rng() % 31) - 15;
    NormalizeResult r = normalize(raw, rel, degree);
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      Assignment a(n);
      for (Var v = 1; v <= n; ++v) a.set(v, (mask >> (v - 1)) & 1);
      Coef lhs = 0;
      for (const RawTerm& t : raw)
        if (a.isTrue(t.lit)) lhs += t.coef;
      bool rawHolds = rel == Relation::GreaterEq ? lhs >= degree : rel == Relation::LessEq ? lhs <= degree : lhs == degree;
      bool normHolds = true;
      for (const PBConstraint& c : r.constraints) normHolds = normHolds && gap(c, a) <= 0;
      REQUIRE(rawHolds == normHolds);
    }
    for (const PBConstraint& c : r.constraints) {
      for (const Term& t : c.terms) {
        CHECK(t.coef > 0);
        CHECK(t.coef <= std::max<Coef>(c.degree, 1));
      }
      CHECK(c.degree > 0);
    }
  }
}

TEST_CASE("gap") {
  PBConstraint c = make({{2, posLit(1)}, {3, posLit(2)}, {1, posLit(3)}}, 4);
  CHECK(gap(c, assign(3, {{2, true}})) == 1);
  PBConstraint d = make({{2, posLit(1)}, {3, posLit(2)}}, 4);
  CHECK(gap(d, Assignment(2)) == 4);
  CHECK(gap(d, assign(2, {{1, true}, {2, true}})) == -1);
}

TEST_CASE("slack") {
  PBConstraint d = make({{2, posLit(1)}, {3, posLit(2)}}, 4);
  CHECK(slack(d, assign(2, {{1, false}})) == -1);
  CHECK(slack(d, Assignment(2)) == 1);
  PBConstraint c = make({{2, posLit(1)}, {3, posLit(2)}, {1, posLit(3)}}, 4);
  CHECK(slack(c, assign(3, {{3, false}})) == 1);
}

TEST_CASE("slack plus gap is the unassigned coefficient sum") {
  std::mt19937_64 rng(11);
  testing::RandomShape shape{8, 6, 10, true, false};
  for (int round = 0; round < 200; ++round) {
    PBFormula f = testing::randomFormula(rng, shape);
    Assignment a(f.numVars);
    for (Var v = 1; v <= f.numVars; ++v)
      if (rng() % 3) a.set(v, rng() % 2);
    for (const PBConstraint& c : f.constraints) {
      Coef open = 0;
      for (const Term& t : c.terms)
        if (!a.assigned(t.lit.var())) open += t.coef;
      CHECK(slack(c, a) + gap(c, a) == open);
    }
  }
}

TEST_CASE("gap does not grow when true literals are added") {
  PBConstraint c = make({{2, posLit(1)}, {3, negLit(2)}, {1, posLit(3)}, {4, posLit(4)}}, 6);
  Assignment a(4);
  Coef prev = gap(c, a);
  for (const Term& t : c.terms) {
    a.set(t.lit.var(), !t.lit.negated());
    Coef g = gap(c, a);
    CHECK(g <= prev);
    prev = g;
  }
}

TEST_CASE("parse: simple constraints") {
  PBFormula f = parseOpb("+1 x1 +1 x2 >= 1 ;\n");
  REQUIRE(f.constraints.size() == 1);
  CHECK(f.numVars == 2);
  CHECK(f.constraints[0].terms == terms({{1, posLit(1)}, {1, posLit(2)}}));
  CHECK(f.constraints[0].degree == 1);

  PBFormula g = parseOpb("+1 x1 +1 x2 = 1 ;");
  CHECK(g.constraints.size() == 2);

  PBFormula h = parseOpb("-2 x1 +3 x2 >= 1 ;");
  REQUIRE(h.constraints.size() == 1);
  CHECK(h.constraints[0].terms == terms({{2, negLit(1)}, {3, posLit(2)}}));
  CHECK(h.constraints[0].degree == 3);
}

TEST_CASE("parse: comments, header, objective and negated literals") {
  PBFormula f = parseOpb(
      "* #variable= 5 #constraint= 1\n"
      "* a comment\n"
      "min: +1 x1 ;\n"
      "\n"
      "+2 ~x3 +1 x4 >= 2 ;\n");
  CHECK(f.numVars == 5);
  REQUIRE(f.constraints.size() == 1);
  CHECK(f.constraints[0].terms == terms({{2, negLit(3)}, {1, posLit(4)}}));
}

TEST_CASE("parse errors name the line") {
  auto lineOf = [](const char* text) -> std::size_t {
    try {
      parseOpb(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(lineOf("+1 x1 >= 1 ;\n+1 x2 >= 1\n") == 2);         // missing ;
  CHECK(lineOf("+1 x0 >= 1 ;") == 1);                       // index below 1
  CHECK(lineOf("* c\n+1 y1 >= 1 ;") == 2);                  // malformed token
  CHECK(lineOf("+1 x1 x2 >= 1 ;") == 1);                    // nonlinear
  CHECK(lineOf("+99999999999999999999 x1 >= 1 ;") == 1);    // out of range
  CHECK(lineOf("+1 x1 >= 1 ;\n+9223372036854775807 x1 +9223372036854775807 x2 >= 9223372036854775807 ;") == 2);  // sum overflow
  CHECK(lineOf("+1 x1 +1 x2 ;") == 1);                      // no relation
  CHECK(lineOf("+1 x1 >= 1 ; +1 x2 >= 1 ;") == 1);          // trailing text
}

TEST_CASE("emit then parse is the identity on normalized formulas") {
  std::mt19937_64 rng(3);
  testing::RandomShape shape;
  for (int round = 0; round < 200; ++round) {
    PBFormula f = testing::randomFormula(rng, shape);
    PBFormula g = parseOpb(emitOpb(f));
    CHECK(g.numVars == f.numVars);
    REQUIRE(g.constraints.size() == f.constraints.size());
    for (std::size_t i = 0; i < f.constraints.size(); ++i) CHECK(g.constraints[i].sameBody(f.constraints[i]));
    CHECK(g.unsat == f.unsat);
  }
}
