#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "../support/random_formula.hpp"
#include "pbmc/engine.hpp"
#include "pbmc/opb.hpp"

using namespace pbmc;

namespace {

std::vector<int> levels(const Engine& e) {
  std::vector<int> out;
  for (const TrailEntry& t : e.trail()) out.push_back(t.level);
  return out;
}

bool impliedBy(const PBFormula& f, const PBConstraint& c) {
  Assignment a(f.numVars);
  for (std::uint32_t mask = 0; mask < (1u << f.numVars); ++mask) {
    for (Var v = 1; v <= f.numVars; ++v) a.set(v, (mask >> (v - 1)) & 1);
    if (f.satisfiedBy(a) && gap(c, a) > 0) return false;
  }
  return true;
}

bool assertingNow(const Engine& e, const PBConstraint& c) {
  Coef s = -c.degree, maxOpen = 0;
  for (const Term& t : c.terms) {
    if (!e.isFalse(t.lit)) s += t.coef;
    if (!e.assigned(t.lit.var())) maxOpen = std::max(maxOpen, t.coef);
  }
  return s >= 0 && maxOpen > s;
}

// Replays the trail and checks each propagated literal against its reason.
void checkReasons(const Engine& e) {
  Assignment a(e.numVars());
  for (const TrailEntry& t : e.trail()) {
    if (t.reason != kNoReason) {
      const PBConstraint& r = e.constraint(t.reason);
      Coef coef = 0;
      for (const Term& term : r.terms)
        if (term.lit == t.lit) coef = term.coef;
      REQUIRE(coef > 0);
      CHECK(coef > slack(r, a));
    }
    a.set(t.lit.var(), !t.lit.negated());
  }
}

void checkFixpoint(const Engine& e) {
  Assignment a(e.numVars());
  for (const TrailEntry& t : e.trail()) a.set(t.lit.var(), !t.lit.negated());
  for (CRef c = 0; c < static_cast<CRef>(e.numOriginal() + e.numLearned()); ++c) {
    const PBConstraint& body = e.constraint(c);
    Coef s = slack(body, a);
    CHECK(s == e.slackOf(c));
    for (const Term& t : body.terms)
      if (!a.assigned(t.lit.var())) CHECK(t.coef <= s);
  }
}

}  // namespace

TEST_CASE("propagate: both literals of a tight constraint") {
  PBFormula f = parseOpb("+2 x1 +3 x2 >= 4 ;");
  Engine e(f);
  CHECK_FALSE(e.propagate());
  CHECK(e.isTrue(posLit(1)));
  CHECK(e.isTrue(posLit(2)));
  CHECK(e.level() == 0);
}

TEST_CASE("propagate: clause unit propagation") {
  PBFormula f = parseOpb("+1 x1 +1 x2 >= 1 ;");
  Engine e(f);
  CHECK_FALSE(e.propagate());
  e.decide(negLit(1));
  CHECK_FALSE(e.propagate());
  CHECK(e.isTrue(posLit(2)));
  CHECK(e.reasonOf(2) == 0);
  CHECK(e.levelOf(2) == 1);
}

TEST_CASE("propagate: conflict") {
  PBFormula f = parseOpb("+1 x1 +1 x2 >= 1 ;\n+1 x1 +1 ~x2 >= 1 ;");
  Engine e(f);
  CHECK_FALSE(e.propagate());
  CHECK_FALSE(e.assigned(1));
  e.decide(negLit(1));
  auto c = e.propagate();
  REQUIRE(c);
  CHECK(e.slackOf(*c) < 0);
}

TEST_CASE("propagate: slack-based propagation of a mixed constraint") {
  PBFormula f = parseOpb("+2 x1 +3 x2 +1 x3 >= 4 ;");
  Engine e(f);
  CHECK_FALSE(e.propagate());
  CHECK_FALSE(e.assigned(1));
  e.decide(negLit(3));
  CHECK_FALSE(e.propagate());
  CHECK(e.isTrue(posLit(1)));
  CHECK(e.isTrue(posLit(2)));
}

TEST_CASE("analyze: contradictory units") {
  PBFormula f = parseOpb("+1 x1 >= 1 ;\n+1 ~x1 >= 1 ;");
  Engine e(f);
  auto c = e.propagate();
  REQUIRE(c);
  AnalysisResult r = e.analyze(*c);
  CHECK(r.kind == AnalysisResult::Kind::TopLevelConflict);
}

TEST_CASE("analyze: learned constraint is implied and asserting") {
  PBFormula f = parseOpb("+2 x1 +1 x2 +1 x3 >= 2 ;\n+2 ~x1 +1 x2 +1 x3 >= 2 ;");
  Engine e(f);
  CHECK_FALSE(e.propagate());
  e.decide(negLit(2));
  auto c = e.propagate();
  if (!c) {
    e.decide(negLit(3));
    c = e.propagate();
  }
  REQUIRE(c);
  AnalysisResult r = e.analyze(*c);
  REQUIRE(r.kind == AnalysisResult::Kind::Learned);
  CHECK(impliedBy(f, r.learned));
  // Every model has x2 or x3 true; the learned constraint must say so too.
  Assignment bothFalse(3);
  bothFalse.set(2, false);
  bothFalse.set(3, false);
  CHECK(slack(r.learned, bothFalse) < 0);
  CHECK(r.backjumpLevel < r.conflictLevel);
  e.learn(r.learned);
  e.backjump(r.backjumpLevel);
  CHECK(assertingNow(e, r.learned));
  CHECK_FALSE(e.propagate());
  checkFixpoint(e);
}

TEST_CASE("backjump truncates the trail by level") {
  PBFormula f;
  f.numVars = 6;
  std::vector<RawTerm> clause{{1, negLit(2)}, {1, posLit(3)}};
  f.add(clause, Relation::GreaterEq, 1);
  std::vector<RawTerm> unit{{1, posLit(1)}};
  f.add(unit, Relation::GreaterEq, 1);
  Engine e(f);
  CHECK_FALSE(e.propagate());
  e.decide(posLit(2));
  CHECK_FALSE(e.propagate());
  e.decide(posLit(4));
  CHECK_FALSE(e.propagate());
  e.decide(posLit(5));
  CHECK_FALSE(e.propagate());
  CHECK(levels(e) == std::vector<int>{0, 1, 1, 2, 3});
  int notified = -1;
  e.setBackjumpListener([&](int lvl) { notified = lvl; });
  e.backjump(1);
  CHECK(levels(e) == std::vector<int>{0, 1, 1});
  CHECK(notified == 1);
  e.backjump(0);
  CHECK(levels(e) == std::vector<int>{0});
  checkFixpoint(e);
}

TEST_CASE("decide and backjump are inverse") {
  PBFormula f = parseOpb("+1 x1 +1 x2 +1 x3 >= 2 ;");
  Engine e(f);
  CHECK_FALSE(e.propagate());
  auto before = e.trail().size();
  e.decide(posLit(1));
  CHECK(e.level() == 1);
  e.decide(negLit(2));
  CHECK(e.level() == 2);
  CHECK(e.levelOf(1) == 1);
  CHECK(e.levelOf(2) == 2);
  e.backjump(0);
  CHECK(e.trail().size() == before);
  CHECK(e.slackOf(0) == 1);
}

TEST_CASE("random search keeps every engine invariant") {
  std::mt19937_64 rng(21);
  int learned = 0;
  for (int round = 0; round < 300; ++round) {
    PBFormula f = round % 2 ? testing::randomClauseMix(rng, 10, 38 + rng() % 10, 3)
                            : testing::randomFormula(rng, {10, 12, 10, true, false, 6, 2, 5});
    if (f.unsat) continue;
    Engine e(f, 4);
    int steps = 0;
    for (; steps < 500; ++steps) {
      if (auto c = e.propagate()) {
        AnalysisResult r = e.analyze(*c);
        if (r.kind == AnalysisResult::Kind::TopLevelConflict) break;
        REQUIRE(impliedBy(f, r.learned));
        e.learn(r.learned);
        e.backjump(r.backjumpLevel);
        REQUIRE(assertingNow(e, r.learned));
        ++learned;
        continue;
      }
      checkReasons(e);
      checkFixpoint(e);
      std::vector<Var> open;
      for (Var v = 1; v <= f.numVars; ++v)
        if (!e.assigned(v)) open.push_back(v);
      if (open.empty()) break;
      e.decide(Lit(open[rng() % open.size()], rng() % 2 == 0));
    }
    CHECK(steps < 500);  // each conflict changes the trail, so search ends
    CHECK(e.numLearned() <= 4);
  }
  CHECK(learned > 80);
}
