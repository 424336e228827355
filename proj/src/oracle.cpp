#include "pbmc/oracle.hpp"

#include <string>
#include <vector>

namespace pbmc {

namespace {

void refuseAbove(std::uint32_t n, std::uint32_t limit) {
  if (n > limit)
    throw OracleRefusal("oracle refuses " + std::to_string(n) + " variables (limit " + std::to_string(limit) + ")");
}

bool holds(const PBConstraint& c, const std::vector<std::int8_t>& value) {
  __int128 sum = 0;
  for (const Term& t : c.terms) {
    bool v = value[t.lit.var()] == 1;
    if (v != t.lit.negated()) sum += t.coef;
  }
  return sum >= c.degree;
}

// Enumerates `free` in binary order on top of `base` and counts assignments
// satisfying every constraint in `cstrs`.
std::uint64_t enumerate(const PBFormula& f, std::vector<std::int8_t> value, const std::vector<Var>& free,
                        const std::vector<const PBConstraint*>& cstrs, std::uint64_t* enumerated) {
  const std::uint64_t total = std::uint64_t{1} << free.size();
  std::uint64_t count = 0;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    for (std::size_t i = 0; i < free.size(); ++i) value[free[i]] = (mask >> i) & 1;
    bool ok = true;
    for (const PBConstraint* c : cstrs) {
      if (!holds(*c, value)) {
        ok = false;
        break;
      }
    }
    if (ok) ++count;
  }
  (void)f;
  if (enumerated) *enumerated = total;
  return count;
}

std::vector<std::int8_t> valuesOf(const Assignment& sigma, std::uint32_t numVars) {
  std::vector<std::int8_t> value(numVars + 1, 0);
  for (Var v = 1; v <= numVars && v <= sigma.numVars(); ++v)
    if (sigma.assigned(v)) value[v] = *sigma.value(v) ? 1 : 0;
  return value;
}

}  // namespace

OracleResult bruteCount(const PBFormula& f, std::uint32_t limitVars) {
  refuseAbove(f.numVars, limitVars);
  std::vector<Var> free;
  for (Var v = 1; v <= f.numVars; ++v) free.push_back(v);
  std::vector<const PBConstraint*> all;
  for (const PBConstraint& c : f.constraints) all.push_back(&c);
  OracleResult r;
  r.count = enumerate(f, std::vector<std::int8_t>(f.numVars + 1, 0), free, all, &r.enumerated);
  return r;
}

ModelCount bruteResidualCount(const PBFormula& f, const Assignment& sigma, std::uint32_t limitVars) {
  std::vector<Var> free;
  for (Var v = 1; v <= f.numVars; ++v)
    if (v > sigma.numVars() || !sigma.assigned(v)) free.push_back(v);
  refuseAbove(static_cast<std::uint32_t>(free.size()), limitVars);
  std::vector<const PBConstraint*> all;
  for (const PBConstraint& c : f.constraints) all.push_back(&c);
  return enumerate(f, valuesOf(sigma, f.numVars), free, all, nullptr);
}

ModelCount bruteRestrictedCount(const PBFormula& f, const Assignment& sigma, std::span<const Var> vars,
                                std::span<const std::uint32_t> cstrs, std::uint32_t limitVars) {
  refuseAbove(static_cast<std::uint32_t>(vars.size()), limitVars);
  std::vector<Var> free(vars.begin(), vars.end());
  std::vector<const PBConstraint*> sel;
  for (std::uint32_t id : cstrs) sel.push_back(&f.constraints.at(id));
  return enumerate(f, valuesOf(sigma, f.numVars), free, sel, nullptr);
}

OracleResult grayCountParallel(const PBFormula& f, std::uint32_t limitVars) {
  refuseAbove(f.numVars, limitVars);
  const std::uint32_t n = f.numVars;
  const std::size_t m = f.constraints.size();
  OracleResult r;
  r.enumerated = std::uint64_t{1} << n;
  for (const PBConstraint& c : f.constraints)
    if (c.coefSum() < c.degree) return r;

  // Occurrences per variable: constraint index and signed contribution of
  // switching the variable from 0 to 1.
  struct Occ {
    std::uint32_t cstr;
    std::int64_t delta;
  };
  std::vector<std::vector<Occ>> occ(n + 1);
  for (std::size_t j = 0; j < m; ++j)
    for (const Term& t : f.constraints[j].terms)
      occ[t.lit.var()].push_back({static_cast<std::uint32_t>(j), t.lit.negated() ? -t.coef : t.coef});

  // High bits pick the block; low bits are walked in Gray order.
  const std::uint32_t high = n >= 16 ? 8 : n / 2;
  const std::uint32_t low = n - high;
  const std::int64_t blocks = std::int64_t{1} << high;
  std::uint64_t total = 0;

#pragma omp parallel for schedule(dynamic) reduction(+ : total)
  for (std::int64_t b = 0; b < blocks; ++b) {
    std::vector<std::int8_t> value(n + 1, 0);
    for (std::uint32_t i = 0; i < high; ++i) value[low + 1 + i] = (b >> i) & 1;
    std::vector<__int128> sum(m, 0);
    std::size_t satisfied = 0;
    for (std::size_t j = 0; j < m; ++j) {
      for (const Term& t : f.constraints[j].terms)
        if ((value[t.lit.var()] == 1) != t.lit.negated()) sum[j] += t.coef;
      if (sum[j] >= f.constraints[j].degree) ++satisfied;
    }
    std::uint64_t local = satisfied == m ? 1 : 0;
    const std::uint64_t steps = std::uint64_t{1} << low;
    for (std::uint64_t g = 1; g < steps; ++g) {
      const Var v = static_cast<Var>(__builtin_ctzll(g)) + 1;
      const bool up = value[v] == 0;
      value[v] = up ? 1 : 0;
      for (const Occ& o : occ[v]) {
        const PBConstraint& c = f.constraints[o.cstr];
        bool before = sum[o.cstr] >= c.degree;
        sum[o.cstr] += up ? o.delta : -o.delta;
        bool after = sum[o.cstr] >= c.degree;
        satisfied += after;
        satisfied -= before;
      }
      if (satisfied == m) ++local;
    }
    total += local;
  }
  r.count = total;
  return r;
}

}  // namespace pbmc
