#include "pbmc/components.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace pbmc {

ComponentSplitter::ComponentSplitter(const PBFormula& formula)
    : formula_(formula),
      parent_(formula.numVars + 1, 0),
      stamp_(formula.numVars + 1, 0),
      compOf_(formula.numVars + 1, -1) {}

Var ComponentSplitter::find(Var v) {
  while (parent_[v] != v) {
    parent_[v] = parent_[parent_[v]];
    v = parent_[v];
  }
  return v;
}

Component ComponentSplitter::rootScope(std::span<const Var> fixed) const {
  std::vector<bool> isFixed(formula_.numVars + 1, false);
  for (Var v : fixed) isFixed[v] = true;
  Component root;
  for (Var v = 1; v <= formula_.numVars; ++v)
    if (!isFixed[v]) root.vars.push_back(v);
  for (const PBConstraint& c : formula_.constraints) {
    root.cstrs.push_back(c.id);
    root.gaps.push_back(c.degree);
  }
  return root;
}

std::vector<Component> ComponentSplitter::split(const Component& scope, std::span<const std::int8_t> values) {
  // stamp_ == epoch_: unassigned scope variable; epoch_ + 1: also occurs in an
  // active constraint.
  epoch_ += 2;
  const std::uint64_t open = epoch_;
  const std::uint64_t linked = epoch_ + 1;
  for (Var v : scope.vars) {
    if (values[v] >= 0) continue;
    stamp_[v] = open;
    parent_[v] = v;
    compOf_[v] = -1;
  }

  struct Active {
    std::uint32_t id;
    Coef gap;
    Coef minOpen;
    Var first;
  };
  std::vector<Active> active;
  for (std::uint32_t cid : scope.cstrs) {
    const PBConstraint& c = formula_.constraints[cid];
    Coef g = c.degree;
    for (const Term& t : c.terms)
      if (values[t.lit.var()] == (t.lit.negated() ? 0 : 1)) g -= t.coef;
    if (g <= 0) continue;
    Var first = 0;
    Coef minOpen = std::numeric_limits<Coef>::max();
    for (const Term& t : c.terms) {
      Var v = t.lit.var();
      if (stamp_[v] != open && stamp_[v] != linked) continue;
      stamp_[v] = linked;
      minOpen = std::min(minOpen, t.coef);
      if (first == 0) {
        first = v;
      } else {
        Var a = find(first), b = find(v);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
      }
    }
    if (first == 0) continue;  // no open literal: satisfied or already falsified
    active.push_back({cid, g, minOpen, first});
  }

  std::vector<Component> out;
  Component freeComp;
  for (Var v : scope.vars) {
    if (values[v] >= 0) continue;
    if (stamp_[v] != linked) {
      freeComp.vars.push_back(v);
      continue;
    }
    Var r = find(v);
    if (compOf_[r] < 0) {
      compOf_[r] = static_cast<std::int32_t>(out.size());
      out.emplace_back();
    }
    out[compOf_[r]].vars.push_back(v);
  }
  for (const Active& a : active) {
    Component& comp = out[compOf_[find(a.first)]];
    comp.cstrs.push_back(a.id);
    comp.gaps.push_back(a.gap);
    comp.minOpenCoef.push_back(a.minOpen);
  }
  if (!freeComp.vars.empty()) out.push_back(std::move(freeComp));
  return out;
}

std::vector<std::uint32_t> deltaEncode(std::span<const std::uint32_t> ids) {
  std::vector<std::uint32_t> out;
  out.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) out.push_back(i == 0 ? ids[0] : ids[i] - ids[i - 1]);
  return out;
}

void appendVarint(std::string& out, std::uint64_t v) {
  while (v >= 0x80) {
    out.push_back(static_cast<char>((v & 0x7f) | 0x80));
    v >>= 7;
  }
  out.push_back(static_cast<char>(v));
}

Coef saturateGap(Coef gap, std::span<const Coef> unassignedCoeffs) {
  Coef m = *std::min_element(unassignedCoeffs.begin(), unassignedCoeffs.end());
  return saturateGap(gap, m);
}

CacheKey encodeComponent(const Component& c, const PBFormula& formula, bool saturate) {
  CacheKey key;
  key.bytes.reserve(c.vars.size() + 2 * c.cstrs.size() + 4);
  appendVarint(key.bytes, c.vars.size());
  for (std::size_t i = 0; i < c.vars.size(); ++i) appendVarint(key.bytes, i == 0 ? c.vars[0] : c.vars[i] - c.vars[i - 1]);
  appendVarint(key.bytes, c.cstrs.size());
  for (std::size_t i = 0; i < c.cstrs.size(); ++i)
    appendVarint(key.bytes, i == 0 ? c.cstrs[0] : c.cstrs[i] - c.cstrs[i - 1]);
  for (std::size_t i = 0; i < c.cstrs.size(); ++i) {
    if (formula.constraints[c.cstrs[i]].isClausal()) continue;
    Coef g = c.gaps[i];
    if (saturate && i < c.minOpenCoef.size()) g = saturateGap(g, c.minOpenCoef[i]);
    appendVarint(key.bytes, static_cast<std::uint64_t>(g - 1));
  }
  return key;
}

namespace {

std::uint64_t readVarint(const std::string& s, std::size_t& pos) {
  std::uint64_t v = 0;
  int shift = 0;
  for (;;) {
    if (pos >= s.size()) throw std::invalid_argument("truncated cache key");
    auto b = static_cast<unsigned char>(s[pos++]);
    v |= static_cast<std::uint64_t>(b & 0x7f) << shift;
    if ((b & 0x80) == 0) return v;
    shift += 7;
  }
}

}  // namespace

DecodedKey decodeComponentKey(const CacheKey& key, const PBFormula& formula) {
  DecodedKey d;
  std::size_t pos = 0;
  auto nVars = readVarint(key.bytes, pos);
  for (std::uint64_t i = 0; i < nVars; ++i) {
    auto x = static_cast<Var>(readVarint(key.bytes, pos));
    d.vars.push_back(i == 0 ? x : d.vars.back() + x);
  }
  auto nCstrs = readVarint(key.bytes, pos);
  for (std::uint64_t i = 0; i < nCstrs; ++i) {
    auto x = static_cast<std::uint32_t>(readVarint(key.bytes, pos));
    d.cstrs.push_back(i == 0 ? x : d.cstrs.back() + x);
  }
  for (std::uint32_t cid : d.cstrs)
    if (!formula.constraints.at(cid).isClausal()) d.recordedGaps.push_back(static_cast<Coef>(readVarint(key.bytes, pos)) + 1);
  if (pos != key.bytes.size()) throw std::invalid_argument("trailing bytes in cache key");
  return d;
}

}  // namespace pbmc
