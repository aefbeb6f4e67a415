#include "qpnls/serialize.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace qpnls {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string poly_to_text(const HamiltonianPoly& W) {
  std::string out = "# d " + std::to_string(W.dim()) + "\n";
  for (auto& [m, c] : W.terms()) {
    std::string line;
    for (auto& [site, e] : m.entries()) {
      if (!line.empty()) line += ' ';
      line += to_string(site) + ":(" + std::to_string(e.q) + "," +
              std::to_string(e.qbar) + ")";
    }
    line += " # " + format_double(c.real()) + " " + format_double(c.imag());
    out += line + "\n";
  }
  return out;
}

namespace {

[[noreturn]] void parse_fail(int lineno, const std::string& what) {
  throw std::runtime_error("poly_from_text: line " + std::to_string(lineno) +
                           ": " + what);
}

MultiIndex parse_site(const std::string& s, int lineno) {
  MultiIndex j;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t next = s.find(',', pos);
    std::string tok = s.substr(pos, next == std::string::npos ? next : next - pos);
    if (tok.empty()) parse_fail(lineno, "empty coordinate");
    j.c.push_back(std::stoi(tok));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  if (j.c.empty()) parse_fail(lineno, "empty site");
  return j;
}

}  // namespace

HamiltonianPoly poly_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  int dim = 0;
  HamiltonianPoly out(1);
  bool have_dim = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream hs(line.substr(1));
      std::string key;
      if (hs >> key && key == "d" && hs >> dim) {
        if (dim < 1) parse_fail(lineno, "bad dimension");
        out = HamiltonianPoly(dim);
        have_dim = true;
      }
      continue;
    }
    if (!have_dim) parse_fail(lineno, "term before `# d <dim>` header");
    std::size_t hash = line.find(" # ");
    if (hash == std::string::npos) parse_fail(lineno, "missing coefficient");
    std::istringstream coeffs(line.substr(hash + 3));
    double re = 0, im = 0;
    if (!(coeffs >> re >> im)) parse_fail(lineno, "bad coefficient");
    std::vector<Monomial::Entry> entries;
    std::istringstream body(line.substr(0, hash));
    std::string tok;
    while (body >> tok) {
      std::size_t colon = tok.find(':');
      if (colon == std::string::npos || tok.size() < colon + 6 ||
          tok[colon + 1] != '(' || tok.back() != ')')
        parse_fail(lineno, "bad term token `" + tok + "`");
      MultiIndex site = parse_site(tok.substr(0, colon), lineno);
      if (site.dim() != dim) parse_fail(lineno, "site dimension mismatch");
      std::string exps = tok.substr(colon + 2, tok.size() - colon - 3);
      std::size_t comma = exps.find(',');
      if (comma == std::string::npos) parse_fail(lineno, "bad exponents");
      SiteExponents e{std::stoi(exps.substr(0, comma)),
                      std::stoi(exps.substr(comma + 1))};
      entries.push_back({site, e});
    }
    if (entries.empty()) parse_fail(lineno, "constant term not allowed");
    out.add_term(Monomial::make(std::move(entries)), Coeff(re, im));
  }
  if (!have_dim) parse_fail(lineno, "missing `# d <dim>` header");
  return out;
}

}  // namespace qpnls
