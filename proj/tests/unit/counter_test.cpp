#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "../support/random_formula.hpp"
#include "pbmc/counter.hpp"
#include "pbmc/generators.hpp"
#include "pbmc/opb.hpp"
#include "pbmc/oracle.hpp"
#include "pbmc/preprocess.hpp"

using namespace pbmc;

namespace {

ModelCount count(const char* opb, CounterConfig config = {}) { return countPBMC(parseOpb(opb), config); }

std::vector<CounterConfig> allConfigs() {
  std::vector<CounterConfig> out;
  for (Heuristic h : {Heuristic::Vcis, Heuristic::Baseline})
    for (bool sat : {true, false})
      for (bool pre : {true, false}) {
        CounterConfig c;
        c.heuristic = h;
        c.cacheSaturation = sat;
        c.preprocess = pre;
        out.push_back(c);
      }
  CounterConfig staticOnly;
  staticOnly.vcisStaticOnly = true;
  out.push_back(staticOnly);
  CounterConfig tinyCache;
  tinyCache.cacheBytes = 4096;
  out.push_back(tinyCache);
  CounterConfig fewLearned;
  fewLearned.learnedCap = 2;
  out.push_back(fewLearned);
  return out;
}

}  // namespace

TEST_CASE("count: small examples") {
  CHECK(count("+1 x1 +1 x2 >= 1 ;") == 3);
  CHECK(count("+2 x1 +3 x2 +4 x3 <= 5 ;") == 5);
  CHECK(count("+1 x1 +1 x2 = 1 ;") == 2);
  CHECK(count("+1 x1 >= 1 ;\n+1 ~x1 >= 1 ;") == 0);
  CHECK(count("+1 x1 +1 x2 >= 3 ;") == 0);
  CHECK(count("* #variable= 3\n") == 8);
}

TEST_CASE("count: product of disjoint components") {
  CHECK(count("+1 x1 +1 x2 >= 1 ;\n+1 x3 +1 x4 >= 1 ;") == 9);
}

TEST_CASE("count: large counts do not overflow") {
  PBFormula f;
  f.numVars = 100;
  std::vector<RawTerm> clause{{1, posLit(1)}, {1, posLit(2)}};
  f.add(clause, Relation::GreaterEq, 1);
  CHECK(countPBMC(f) == ModelCount(3) * powerOfTwo(98));
}

TEST_CASE("preprocess: forced literal and free variable") {
  PBFormula f = parseOpb("+1 x1 >= 1 ;\n+1 x1 +1 x2 >= 1 ;");
  Preprocessed p = preprocess(f);
  CHECK_FALSE(p.unsat);
  CHECK(p.fixed == std::vector<Var>{1});
  CHECK(p.formula.constraints.empty());
  CHECK(p.formula.numVars == 2);
  CHECK(countPBMC(f) == 2);
}

TEST_CASE("preprocess: duplicates are stored once") {
  PBFormula f = parseOpb("+1 x1 +2 x2 +1 x3 >= 2 ;\n+1 x3 +1 x1 +2 x2 >= 2 ;");
  Preprocessed p = preprocess(f);
  CHECK(p.formula.constraints.size() == 1);
}

TEST_CASE("preprocess: contradictory units") {
  Preprocessed p = preprocess(parseOpb("+1 x1 >= 1 ;\n+1 ~x1 >= 1 ;"));
  CHECK(p.unsat);
}

TEST_CASE("preprocess preserves the count") {
  std::mt19937_64 rng(17);
  testing::RandomShape shape{12, 10, 10, true, false};
  for (int round = 0; round < 300; ++round) {
    PBFormula f = testing::randomFormula(rng, shape);
    Preprocessed p = preprocess(f);
    ModelCount expected = bruteCount(f).count;
    if (p.unsat) {
      CHECK(expected == 0);
      continue;
    }
    // Fixed variables are forced, so they contribute a factor of one.
    PBFormula reduced = p.formula;
    for (Var v : p.fixed) {
      std::vector<RawTerm> pin{{1, posLit(v)}};
      reduced.add(pin, Relation::GreaterEq, 1);
    }
    CHECK(bruteCount(reduced).count == expected);
  }
}

TEST_CASE("count matches brute force under every configuration") {
  std::mt19937_64 rng(1234);
  const auto configs = allConfigs();
  for (int round = 0; round < 150; ++round) {
    PBFormula f = round % 3 == 0 ? testing::randomClauseMix(rng, 16, 40 + rng() % 30, 3)
                                 : testing::randomFormula(rng, {16, 14, 10, true, round % 2 == 0, 4, 1, 6});
    ModelCount expected = bruteCount(f).count;
    for (const CounterConfig& c : configs) REQUIRE(countPBMC(f, c) == expected);
  }
}

TEST_CASE("count: generated families at small scale") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    std::vector<std::string> texts{
        genKnapsack({12, 2, 30, 0.5, seed}),
        genAuction({14, 8, 3, 50, 0.4, seed}),
    };
    SensorSpec s;
    s.sensors = 14;
    s.seed = seed;
    texts.push_back(genSensor(s, false));
    s.redundancy = 0.4;
    texts.push_back(genSensor(s, true));
    for (const std::string& t : texts) {
      PBFormula f = parseOpb(t);
      CHECK(countPBMC(f) == bruteCount(f).count);
    }
  }
}

TEST_CASE("deterministic decisions") {
  std::mt19937_64 rng(55);
  for (int round = 0; round < 20; ++round) {
    PBFormula f = testing::randomClauseMix(rng, 20, 70, 4);
    CountResult a = Counter(f).run();
    CountResult b = Counter(f).run();
    CHECK(a.count == b.count);
    CHECK(a.stats.traceHash == b.stats.traceHash);
    CHECK(a.stats.decisions == b.stats.decisions);
  }
}

TEST_CASE("VCIS scores") {
  VcisScores s = computeVcisScores(parseOpb("+3 x1 +2 x2 >= 4 ;"));
  CHECK(s.score[1] == doctest::Approx(0.75));
  VcisScores t = computeVcisScores(parseOpb("+2 x1 +3 x2 >= 4 ;\n+1 x1 +1 x3 >= 2 ;"));
  CHECK(t.score[1] == doctest::Approx(0.5));
  VcisScores u = computeVcisScores(parseOpb("* #variable= 4\n+1 x1 +1 x2 >= 1 ;"));
  CHECK(u.score[4] == 0.0);
}

TEST_CASE("VCIS phase follows the heavier polarity") {
  VcisScores s = computeVcisScores(parseOpb("+3 ~x1 +1 x2 >= 3 ;\n+1 x1 +1 x3 >= 2 ;"));
  CHECK_FALSE(s.positivePhase[1]);  // 3/3 against 1/2
  CHECK(s.positivePhase[2]);
  VcisScores t = computeVcisScores(parseOpb("+1 ~x1 +1 x2 >= 1 ;\n+1 x1 +1 x3 >= 1 ;"));
  CHECK(t.positivePhase[1]);  // tie
}

TEST_CASE("VCIS scores are invariant under scaling a constraint") {
  std::mt19937_64 rng(2);
  for (int round = 0; round < 100; ++round) {
    PBFormula f = testing::randomFormula(rng, {10, 6, 10, false, false});
    PBFormula g;
    g.numVars = f.numVars;
    Coef k = 1 + static_cast<Coef>(rng() % 7);
    for (PBConstraint c : f.constraints) {
      for (Term& t : c.terms) t.coef *= k;
      c.degree *= k;
      g.add(c);
    }
    VcisScores a = computeVcisScores(f), b = computeVcisScores(g);
    for (Var v = 1; v <= f.numVars; ++v) CHECK(a.score[v] == doctest::Approx(b.score[v]).epsilon(1e-12));
  }
}

TEST_CASE("pick: highest score wins, ties to the smallest id") {
  // x1 scores 0.9 (9/10), x2 scores 0.2 (2/10); no activity yet.
  PBFormula f = parseOpb("+9 x1 +2 x2 +1 x3 >= 10 ;");
  Engine e(f);
  BranchHeuristic h(f, Heuristic::Vcis);
  Component c;
  c.vars = {1, 2, 3};
  c.cstrs = {0};
  CHECK(h.pick(c, e).code() == posLit(1).code());
  Component single;
  single.vars = {3};
  CHECK(h.pick(single, e).var() == 3);

  PBFormula g = parseOpb("+1 x1 +1 x2 >= 1 ;");
  Engine eg(g);
  BranchHeuristic hg(g, Heuristic::Baseline);
  Component both;
  both.vars = {1, 2};
  both.cstrs = {0};
  CHECK(hg.pick(both, eg).code() == negLit(1).code());  // saved phase defaults to false
}

TEST_CASE("timeout is reported") {
  // Long enough that the cooperative check fires before the count ends.
  PBFormula f = parseOpb(genKnapsack({34, 3, 100000, 0.5, 1}));
  CounterConfig c;
  c.timeoutSeconds = 0.2;
  CHECK_THROWS_AS(Counter(f, c).run(), TimeoutError);
}

TEST_CASE("learned hook sees every conflict") {
  std::mt19937_64 rng(9);
  std::uint64_t seen = 0, conflicts = 0;
  for (int round = 0; round < 20; ++round) {
    PBFormula f = testing::randomClauseMix(rng, 14, 60, 2);
    Counter counter(f);
    counter.setLearnedHook([&](const Engine& e, const AnalysisResult& r) {
      ++seen;
      CHECK(e.level() == r.conflictLevel - 1);
    });
    CountResult r = counter.run();
    conflicts += r.stats.conflicts;
  }
  CHECK(seen > 0);
  CHECK(seen <= conflicts);
}

TEST_CASE("corrupted cache is caught by the oracle") {
  PBFormula f = parseOpb(genKnapsack({14, 1, 20, 0.5, 3}));
  CounterConfig c;
  c.corruptCacheForTesting = true;
  CHECK(countPBMC(f, c) != bruteCount(f).count);
}
