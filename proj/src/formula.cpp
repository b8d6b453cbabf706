// Copyright 2026 The STAC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "stac/formula.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>
#include <unordered_set>

#include "stac/rng.hpp"

namespace stac {

namespace {

void validate_clause(const Clause& clause, Var num_vars) {
  if (clause.literals.empty()) throw FormulaError("empty clause");
  std::unordered_set<Literal> seen;
  for (Literal lit : clause.literals) {
    if (lit == 0 || var_of(lit) > num_vars) {
      throw FormulaError("literal " + std::to_string(lit) + " out of range");
    }
    if (!seen.insert(lit).second) {
      throw FormulaError("duplicate literal " + std::to_string(lit) + " in clause");
    }
  }
}

void validate_xor(const XorConstraint& x, Var num_vars) {
  std::unordered_set<Var> seen;
  for (Var v : x.vars) {
    if (v == 0 || v > num_vars) {
      throw FormulaError("xor variable " + std::to_string(v) + " out of range");
    }
    if (!seen.insert(v).second) {
      throw FormulaError("duplicate variable " + std::to_string(v) + " in xor");
    }
  }
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename Int>
bool parse_int(std::string_view token, Int& out) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

}  // namespace

CnfFormula::CnfFormula(Var num_vars, std::vector<Clause> clauses,
                       std::vector<XorConstraint> xors)
    : num_vars_(num_vars), clauses_(std::move(clauses)) {
  if (num_vars_ == 0) throw FormulaError("formula must have at least one variable");
  for (const Clause& c : clauses_) validate_clause(c, num_vars_);
  xors_.reserve(xors.size());
  for (XorConstraint& x : xors) {
    validate_xor(x, num_vars_);
    if (!x.is_tautology()) xors_.push_back(std::move(x));
  }
}

bool CnfFormula::trivially_unsat() const {
  return std::any_of(xors_.begin(), xors_.end(),
                     [](const XorConstraint& x) { return x.is_contradiction(); });
}

CnfFormula CnfFormula::with_xors(const std::vector<XorConstraint>& extra) const {
  std::vector<XorConstraint> all = xors_;
  all.insert(all.end(), extra.begin(), extra.end());
  return CnfFormula(num_vars_, clauses_, std::move(all));
}

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

CnfFormula parse_dimacs(std::string_view text) {
  bool have_header = false;
  std::size_t header_line = 0;
  Var num_vars = 0;
  std::uint64_t declared = 0;
  std::vector<Clause> clauses;
  std::vector<XorConstraint> xors;
  std::uint64_t constraint_lines = 0;

  std::vector<Literal> pending;
  std::size_t pending_line = 0;

  auto check_literal = [&](std::size_t line_no, std::string_view token) {
    Literal lit = 0;
    if (!parse_int(token, lit)) {
      throw ParseError(line_no, "invalid literal '" + std::string(token) + "'");
    }
    if (lit != 0 && var_of(lit) > num_vars) {
      throw ParseError(line_no, "variable " + std::to_string(var_of(lit)) + " out of range");
    }
    return lit;
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) continue;
    line.remove_prefix(first);

    if (line[0] == 'c') continue;
    if (line[0] == '%') break;

    if (line[0] == 'p') {
      if (have_header) throw ParseError(line_no, "duplicate header");
      const auto tokens = split_ws(line);
      if (tokens.size() != 4 || tokens[0] != "p" || tokens[1] != "cnf" ||
          !parse_int(tokens[2], num_vars) || !parse_int(tokens[3], declared) ||
          num_vars == 0) {
        throw ParseError(line_no, "malformed header '" + std::string(line) + "'");
      }
      have_header = true;
      header_line = line_no;
      continue;
    }
    if (!have_header) throw ParseError(line_no, "clause before 'p cnf' header");

    if (line[0] == 'x') {
      if (!pending.empty()) throw ParseError(pending_line, "unterminated clause");
      line.remove_prefix(1);
      const auto tokens = split_ws(line);
      if (tokens.empty() || tokens.back() != "0") {
        throw ParseError(line_no, "unterminated xor constraint");
      }
      bool rhs = true;
      std::vector<Var> vars;
      for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
        const Literal lit = check_literal(line_no, tokens[i]);
        if (lit == 0) throw ParseError(line_no, "zero inside xor constraint");
        if (lit < 0) rhs = !rhs;
        // x XOR x = 0: repeated variables cancel.
        const Var v = var_of(lit);
        auto it = std::find(vars.begin(), vars.end(), v);
        if (it == vars.end()) {
          vars.push_back(v);
        } else {
          vars.erase(it);
        }
      }
      xors.push_back({std::move(vars), rhs});
      ++constraint_lines;
      continue;
    }

    for (std::string_view token : split_ws(line)) {
      const Literal lit = check_literal(line_no, token);
      if (lit == 0) {
        if (pending.empty()) {
          xors.push_back({{}, true});
        } else {
          clauses.push_back({std::move(pending)});
        }
        pending.clear();
        ++constraint_lines;
        continue;
      }
      if (pending.empty()) pending_line = line_no;
      if (std::find(pending.begin(), pending.end(), lit) == pending.end()) {
        pending.push_back(lit);
      }
    }
  }

  if (!have_header) throw ParseError(line_no, "missing 'p cnf' header");
  if (!pending.empty()) throw ParseError(pending_line, "unterminated clause");
  if (constraint_lines != declared) {
    throw ParseError(header_line, "header declares " + std::to_string(declared) +
                                      " clauses but found " +
                                      std::to_string(constraint_lines));
  }
  return CnfFormula(num_vars, std::move(clauses), std::move(xors));
}

std::string emit_dimacs(const CnfFormula& formula) {
  std::ostringstream out;
  out << "p cnf " << formula.num_vars() << ' '
      << formula.clauses().size() + formula.xors().size() << '\n';
  for (const Clause& c : formula.clauses()) {
    for (Literal lit : c.literals) out << lit << ' ';
    out << "0\n";
  }
  for (const XorConstraint& x : formula.xors()) {
    out << 'x';
    for (std::size_t i = 0; i < x.vars.size(); ++i) {
      const bool negate = (i == 0 && !x.rhs);
      out << ' ' << (negate ? "-" : "") << x.vars[i];
    }
    out << " 0\n";
  }
  return out.str();
}

CnfFormula generate_random_3cnf(Var n, std::uint32_t m, std::uint64_t seed) {
  if (n < 3) throw FormulaError("random 3-CNF needs at least 3 variables");
  RngStream rng(seed, StreamDomain::kGenerator, n, m);
  std::vector<Clause> clauses;
  clauses.reserve(m);
  for (std::uint32_t i = 0; i < m; ++i) {
    Clause c;
    while (c.literals.size() < 3) {
      const Var v = static_cast<Var>(rng.uniform_below(n)) + 1;
      const bool taken = std::any_of(c.literals.begin(), c.literals.end(),
                                     [v](Literal l) { return var_of(l) == v; });
      if (taken) continue;
      const Literal lit = static_cast<Literal>(v);
      c.literals.push_back(rng.next_bit() ? lit : -lit);
    }
    clauses.push_back(std::move(c));
  }
  return CnfFormula(n, std::move(clauses));
}

CnfFormula generate_fixed_count(Var n, Var free_vars) {
  if (free_vars > n) throw FormulaError("free_vars exceeds variable count");
  std::vector<Clause> clauses;
  for (Var v = free_vars + 1; v <= n; ++v) {
    const Literal lit = static_cast<Literal>(v);
    clauses.push_back({{v % 2 == 0 ? lit : -lit}});
  }
  return CnfFormula(n, std::move(clauses));
}

}  // namespace stac
