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
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "stac/formula.hpp"

namespace stac {

struct SolveResult {
  bool sat = false;
  std::optional<Assignment> witness;  // present iff sat
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
};

/// Thrown when a solve call reaches its step limit without a verdict.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded() : std::runtime_error("solver step budget exceeded") {}
};

/// Step limit for a single solve call, counted as decisions + propagations.
using SolveBudget = std::optional<std::uint64_t>;

/// DPLL decision procedure for CNF+XOR formulas.
///
/// Clauses use two-watched-literal unit propagation. XOR constraints are kept
/// as a reduced row-echelon matrix over GF(2); each assignment updates the
/// matrix in place and re-pivots only the rows that lost their pivot, so unit
/// rows and 0 = 1 conflicts are found at every propagation fixpoint without
/// ever expanding a parity constraint into clauses. Backtracking is
/// chronological and restores the matrix from a per-level snapshot.
///
/// Branching picks the unassigned variable with the most occurrences (ties to
/// the lowest index) and tries `false` first. There is no randomness, so
/// results are reproducible.
///
/// An instance is single-threaded. Distinct instances over the same formula may
/// run concurrently.
class Solver {
 public:
  explicit Solver(const CnfFormula& formula);

  /// Adds a clause to every subsequent solve call (used for blocking clauses).
  void add_clause(std::span<const Literal> literals);
  /// Adds an XOR constraint to every subsequent solve call.
  void add_xor(const XorConstraint& constraint);

  /// `extra_xors` apply to this call only, which lets callers probe prefixes of
  /// a hash chain without rebuilding the clause database.
  SolveResult solve(std::span<const Literal> assumptions = {},
                    std::span<const XorConstraint> extra_xors = {},
                    SolveBudget budget = std::nullopt);

  Var num_vars() const { return num_vars_; }

 private:
  class Search;
  friend class Search;

  struct ClauseSpan {
    std::uint32_t start;
    std::uint32_t size;
  };

  Var num_vars_;
  std::vector<std::uint32_t> clause_lits_;  // encoded literals, see Search
  std::vector<ClauseSpan> clauses_;
  std::vector<std::uint32_t> units_;
  std::vector<XorConstraint> xors_;
  bool has_empty_clause_ = false;
  std::vector<std::uint32_t> occurrences_;
};

/// One-shot convenience wrapper.
SolveResult solve(const CnfFormula& formula, std::span<const Literal> assumptions = {},
                  SolveBudget budget = std::nullopt);

/// True iff every clause has a true literal and every XOR parity matches.
/// Throws std::invalid_argument if the assignment does not cover the formula.
bool evaluate(const CnfFormula& formula, const Assignment& assignment);

}  // namespace stac
