#include "pbmc/opb.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace pbmc {

namespace {

std::vector<std::string_view> splitWs(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

Coef parseInt(std::string_view tok, std::size_t line) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  Coef v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec == std::errc::result_out_of_range) throw ParseError(line, "integer out of 64-bit range: " + std::string(tok));
  if (ec != std::errc() || ptr != tok.data() + tok.size() || tok.empty())
    throw ParseError(line, "expected integer, got '" + std::string(tok) + "'");
  return v;
}

bool isLiteralToken(std::string_view tok) {
  if (!tok.empty() && tok.front() == '~') tok.remove_prefix(1);
  return tok.size() >= 2 && tok.front() == 'x';
}

Lit parseLiteral(std::string_view tok, std::size_t line) {
  bool neg = false;
  if (!tok.empty() && tok.front() == '~') {
    neg = true;
    tok.remove_prefix(1);
  }
  tok.remove_prefix(1);  // 'x'
  std::uint64_t idx = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), idx);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError(line, "malformed variable 'x" + std::string(tok) + "'");
  if (idx < 1) throw ParseError(line, "variable index must be >= 1");
  if (idx > (1u << 30)) throw ParseError(line, "variable index too large");
  return Lit(static_cast<Var>(idx), neg);
}

void parseHeader(std::string_view line, RawOpb& out) {
  auto pos = line.find("#variable=");
  if (pos == std::string_view::npos) return;
  auto toks = splitWs(line.substr(pos + 10));
  if (toks.empty()) return;
  std::uint32_t n = 0;
  auto [ptr, ec] = std::from_chars(toks[0].data(), toks[0].data() + toks[0].size(), n);
  if (ec == std::errc()) out.declaredVars = n;
}

}  // namespace

RawOpb parseOpbRaw(std::string_view text) {
  RawOpb out;
  std::size_t lineNo = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++lineNo;

    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    auto first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos) {
      if (end == text.size()) break;
      continue;
    }
    line.remove_prefix(first);
    if (line.front() == '*') {
      parseHeader(line, out);
      continue;
    }

    auto semi = line.find(';');
    if (semi == std::string_view::npos) throw ParseError(lineNo, "missing ';'");
    if (line.substr(semi + 1).find_first_not_of(" \t") != std::string_view::npos)
      throw ParseError(lineNo, "unexpected text after ';'");
    auto toks = splitWs(line.substr(0, semi));

    if (!toks.empty() && (toks[0] == "min:" || toks[0] == "max:")) continue;

    RawConstraint rc;
    rc.line = lineNo;
    std::size_t i = 0;
    bool sawRelation = false;
    while (i < toks.size()) {
      std::string_view tok = toks[i];
      if (tok == ">=" || tok == "=" || tok == "<=") {
        rc.relation = tok == ">=" ? Relation::GreaterEq : tok == "=" ? Relation::Equal : Relation::LessEq;
        if (i + 2 != toks.size()) throw ParseError(lineNo, "expected a single degree after relation");
        rc.degree = parseInt(toks[i + 1], lineNo);
        sawRelation = true;
        break;
      }
      if (isLiteralToken(tok)) throw ParseError(lineNo, "literal without coefficient: '" + std::string(tok) + "'");
      Coef coef = parseInt(tok, lineNo);
      if (i + 1 >= toks.size() || !isLiteralToken(toks[i + 1]))
        throw ParseError(lineNo, "expected literal after coefficient " + std::string(tok));
      Lit lit = parseLiteral(toks[i + 1], lineNo);
      i += 2;
      if (i < toks.size() && isLiteralToken(toks[i]))
        throw ParseError(lineNo, "nonlinear term (product of literals) is not supported");
      rc.terms.push_back({coef, lit});
      out.maxVar = std::max(out.maxVar, lit.var());
    }
    if (!sawRelation) throw ParseError(lineNo, "missing relational operator");
    out.constraints.push_back(std::move(rc));
    if (end == text.size()) break;
  }
  return out;
}

PBFormula parseOpb(std::string_view text) {
  RawOpb raw = parseOpbRaw(text);
  PBFormula f;
  for (const RawConstraint& rc : raw.constraints) {
    try {
      f.add(normalize(rc.terms, rc.relation, rc.degree));
    } catch (const OverflowError& e) {
      throw ParseError(rc.line, e.what());
    }
  }
  f.numVars = std::max({f.numVars, raw.declaredVars, raw.maxVar});
  return f;
}

PBFormula parseOpbFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parseOpb(ss.str());
}

void emitOpb(const PBFormula& f, std::ostream& os) {
  os << "* #variable= " << f.numVars << " #constraint= " << f.constraints.size() << "\n";
  for (const PBConstraint& c : f.constraints) {
    for (const Term& t : c.terms) os << '+' << t.coef << ' ' << toString(t.lit) << ' ';
    os << ">= " << c.degree << " ;\n";
  }
}

std::string emitOpb(const PBFormula& f) {
  std::ostringstream os;
  emitOpb(f, os);
  return os.str();
}

}  // namespace pbmc
