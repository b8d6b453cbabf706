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

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace stac {

/// DIMACS-style signed literal: +v is x_v, -v is not x_v. Variables are 1-based.
using Literal = std::int32_t;
using Var = std::uint32_t;

inline Var var_of(Literal lit) { return static_cast<Var>(lit < 0 ? -lit : lit); }

/// Non-empty disjunction of literals with no repeated literal. A clause that
/// holds both v and -v is tautologous and kept as written.
struct Clause {
  std::vector<Literal> literals;

  friend bool operator==(const Clause&, const Clause&) = default;
};

/// Parity constraint: XOR of `vars` equals `rhs`. Empty `vars` with rhs=true
/// is the syntactic contradiction; empty with rhs=false is a tautology.
struct XorConstraint {
  std::vector<Var> vars;
  bool rhs = true;

  bool is_contradiction() const { return vars.empty() && rhs; }
  bool is_tautology() const { return vars.empty() && !rhs; }

  friend bool operator==(const XorConstraint&, const XorConstraint&) = default;
};

/// Total assignment over variables 1..n. Index 0 is unused so that
/// `values[v]` reads naturally.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(Var num_vars) : values_(num_vars + 1, false) {}

  Var num_vars() const { return values_.empty() ? 0 : static_cast<Var>(values_.size() - 1); }
  bool operator[](Var v) const { return values_[v]; }
  void set(Var v, bool value) { values_[v] = value; }
  bool satisfies(Literal lit) const { return values_[var_of(lit)] == (lit > 0); }

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::vector<bool> values_;
};

class FormulaError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Immutable CNF formula with optional XOR constraints.
class CnfFormula {
 public:
  /// Validates every invariant; throws FormulaError on violation. Tautological
  /// empty XORs are dropped since they constrain nothing.
  CnfFormula(Var num_vars, std::vector<Clause> clauses, std::vector<XorConstraint> xors = {});

  Var num_vars() const { return num_vars_; }
  const std::vector<Clause>& clauses() const { return clauses_; }
  const std::vector<XorConstraint>& xors() const { return xors_; }

  /// True if the formula contains the empty-XOR contradiction.
  bool trivially_unsat() const;

  /// Copy with extra XOR constraints appended.
  CnfFormula with_xors(const std::vector<XorConstraint>& extra) const;

  friend bool operator==(const CnfFormula&, const CnfFormula&) = default;

 private:
  Var num_vars_;
  std::vector<Clause> clauses_;
  std::vector<XorConstraint> xors_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Reads DIMACS CNF, including `x`-prefixed XOR lines. The header's clause
/// count covers both clause and XOR lines. An empty clause ("0") is stored as
/// the empty-XOR contradiction.
CnfFormula parse_dimacs(std::string_view text);

/// Writes the canonical form: "p cnf n m", one clause per line, XOR lines as
/// "x l1 ... lk 0" with the first literal negated when rhs is false.
std::string emit_dimacs(const CnfFormula& formula);

/// m clauses over n >= 3 variables, each with 3 distinct uniformly chosen
/// variables and uniform signs. Deterministic in (n, m, seed).
CnfFormula generate_random_3cnf(Var n, std::uint32_t m, std::uint64_t seed);

/// n variables, of which the last n - free_vars are pinned by unit clauses, so
/// the model count is exactly 2^free_vars. Used for scaling experiments.
CnfFormula generate_fixed_count(Var n, Var free_vars);

}  // namespace stac
