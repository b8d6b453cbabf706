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

#include "stac/solver.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace stac {

namespace {

// Literal codes: 2*v for x_v, 2*v+1 for not x_v.
inline std::uint32_t encode(Literal lit) {
  return 2 * var_of(lit) + (lit < 0 ? 1u : 0u);
}
inline Var code_var(std::uint32_t code) { return code >> 1; }
inline bool code_negative(std::uint32_t code) { return code & 1u; }

constexpr std::int8_t kUnassigned = -1;

/// Fully reduced row-echelon GF(2) system over the currently unassigned
/// variables. Every live row owns a pivot column that appears in no other row.
class XorMatrix {
 public:
  explicit XorMatrix(Var num_vars) : words_((num_vars + 64) / 64) {}

  /// Adds a row and re-reduces. Returns false on a 0 = 1 row.
  bool add_row(const XorConstraint& x) {
    std::vector<std::uint64_t> row(words_, 0);
    for (Var v : x.vars) row[v / 64] ^= bit(v);
    bool rhs = x.rhs;
    for (std::size_t s = 0; s < pivot_.size(); ++s) {
      if (pivot_[s] != 0 && test(row.data(), pivot_[s])) {
        xor_into(row.data(), row_ptr(s));
        rhs ^= rhs_[s] != 0;
      }
    }
    const Var p = lowest(row.data());
    if (p == 0) return !rhs;
    for (std::size_t s = 0; s < pivot_.size(); ++s) {
      if (pivot_[s] != 0 && test(row_ptr(s), p)) {
        xor_into(row_ptr(s), row.data());
        rhs_[s] ^= rhs ? 1 : 0;
      }
    }
    bits_.insert(bits_.end(), row.begin(), row.end());
    rhs_.push_back(rhs ? 1 : 0);
    pivot_.push_back(p);
    return true;
  }

  /// Substitutes v := value. Returns false if some row collapses to 0 = 1.
  bool assign(Var v, bool value) {
    const std::size_t w = v / 64;
    const std::uint64_t m = bit(v);
    std::size_t lost = pivot_.size();
    for (std::size_t r = 0; r < pivot_.size(); ++r) {
      if (pivot_[r] == 0) continue;
      std::uint64_t& word = bits_[r * words_ + w];
      if (!(word & m)) continue;
      word &= ~m;
      if (value) rhs_[r] ^= 1;
      if (pivot_[r] == v) lost = r;
    }
    if (lost == pivot_.size()) return true;

    const Var p = lowest(row_ptr(lost));
    if (p == 0) {
      pivot_[lost] = 0;
      return rhs_[lost] == 0;
    }
    pivot_[lost] = p;
    for (std::size_t s = 0; s < pivot_.size(); ++s) {
      if (s != lost && pivot_[s] != 0 && test(row_ptr(s), p)) {
        xor_into(row_ptr(s), row_ptr(lost));
        rhs_[s] ^= rhs_[lost];
      }
    }
    return true;
  }

  /// Rows reduced to a single variable force that variable.
  template <typename Fn>
  void for_each_unit(Fn&& fn) const {
    for (std::size_t r = 0; r < pivot_.size(); ++r) {
      if (pivot_[r] == 0) continue;
      const std::uint64_t* row = row_ptr(r);
      int count = 0;
      for (std::size_t w = 0; w < words_ && count < 2; ++w) count += std::popcount(row[w]);
      if (count == 1) fn(pivot_[r], rhs_[r] != 0);
    }
  }

 private:
  static std::uint64_t bit(Var v) { return std::uint64_t{1} << (v % 64); }
  static bool test(const std::uint64_t* row, Var v) { return row[v / 64] & bit(v); }

  const std::uint64_t* row_ptr(std::size_t r) const { return bits_.data() + r * words_; }
  std::uint64_t* row_ptr(std::size_t r) { return bits_.data() + r * words_; }

  void xor_into(std::uint64_t* dst, const std::uint64_t* src) const {
    for (std::size_t w = 0; w < words_; ++w) dst[w] ^= src[w];
  }

  Var lowest(const std::uint64_t* row) const {
    for (std::size_t w = 0; w < words_; ++w) {
      if (row[w]) return static_cast<Var>(w * 64 + std::countr_zero(row[w]));
    }
    return 0;
  }

  std::size_t words_;
  std::vector<std::uint64_t> bits_;
  std::vector<std::uint8_t> rhs_;
  std::vector<Var> pivot_;  // 0 marks a dead (fully assigned) row
};

}  // namespace

class Solver::Search {
 public:
  Search(Solver& solver, std::span<const XorConstraint> extra_xors, SolveBudget budget)
      : s_(solver),
        n_(solver.num_vars_),
        budget_(budget),
        assign_(n_ + 1, kUnassigned),
        watches_(2 * (n_ + 1)),
        matrix_(n_) {
    trail_.reserve(n_);
    for (std::uint32_t c = 0; c < s_.clauses_.size(); ++c) {
      const ClauseSpan& cs = s_.clauses_[c];
      watches_[s_.clause_lits_[cs.start]].push_back(c);
      watches_[s_.clause_lits_[cs.start + 1]].push_back(c);
    }
    std::vector<std::uint32_t> occ = s_.occurrences_;
    for (const XorConstraint& x : extra_xors) {
      for (Var v : x.vars) ++occ[v];
    }
    for (Var v = 1; v <= n_; ++v) {
      if (occ[v] > 0) order_.push_back(v);
    }
    std::stable_sort(order_.begin(), order_.end(),
                     [&occ](Var a, Var b) { return occ[a] > occ[b]; });
    extra_ = extra_xors;
  }

  SolveResult run(std::span<const Literal> assumptions) {
    SolveResult result;
    const bool sat = search(assumptions);
    result.sat = sat;
    result.decisions = decisions_;
    result.propagations = propagations_;
    if (sat) {
      Assignment witness(n_);
      for (Var v = 1; v <= n_; ++v) witness.set(v, assign_[v] == 1);
      result.witness = std::move(witness);
    }
    return result;
  }

 private:
  struct Level {
    std::uint32_t decision;
    bool flipped;
    std::size_t trail_start;
    XorMatrix snapshot;
  };

  bool search(std::span<const Literal> assumptions) {
    if (s_.has_empty_clause_) return false;
    for (const XorConstraint& x : s_.xors_) {
      if (!matrix_.add_row(x)) return false;
    }
    for (const XorConstraint& x : extra_) {
      if (!matrix_.add_row(x)) return false;
    }
    for (std::uint32_t code : s_.units_) {
      if (!enqueue(code)) return false;
    }
    for (Literal lit : assumptions) {
      if (lit == 0 || var_of(lit) > n_) {
        throw std::invalid_argument("assumption literal out of range");
      }
      if (!enqueue(encode(lit))) return false;
    }
    if (!propagate()) return false;

    for (;;) {
      const Var v = pick_branch();
      if (v == 0) return true;
      ++decisions_;
      charge();
      levels_.push_back({2 * v + 1, false, trail_.size(), matrix_});
      enqueue(2 * v + 1);
      while (!propagate()) {
        if (!backtrack()) return false;
      }
    }
  }

  // Undoes levels until one can be flipped; false when the tree is exhausted.
  bool backtrack() {
    while (!levels_.empty()) {
      Level& level = levels_.back();
      for (std::size_t i = level.trail_start; i < trail_.size(); ++i) {
        assign_[code_var(trail_[i])] = kUnassigned;
      }
      trail_.resize(level.trail_start);
      qhead_ = xhead_ = trail_.size();
      matrix_ = level.snapshot;
      if (!level.flipped) {
        level.flipped = true;
        level.decision ^= 1u;
        ++decisions_;
        charge();
        enqueue(level.decision);
        return true;
      }
      levels_.pop_back();
    }
    return false;
  }

  Var pick_branch() const {
    for (Var v : order_) {
      if (assign_[v] == kUnassigned) return v;
    }
    return 0;
  }

  bool value_true(std::uint32_t code) const {
    const std::int8_t a = assign_[code_var(code)];
    return a != kUnassigned && (a == 1) != code_negative(code);
  }
  bool value_false(std::uint32_t code) const {
    const std::int8_t a = assign_[code_var(code)];
    return a != kUnassigned && (a == 1) == code_negative(code);
  }

  // Returns false if the literal is already false.
  bool enqueue(std::uint32_t code) {
    const Var v = code_var(code);
    if (assign_[v] != kUnassigned) return value_true(code);
    assign_[v] = code_negative(code) ? 0 : 1;
    trail_.push_back(code);
    return true;
  }

  void charge() {
    if (budget_ && decisions_ + propagations_ > *budget_) throw BudgetExceeded();
  }

  bool propagate() {
    for (;;) {
      if (!propagate_clauses()) return false;
      while (xhead_ < trail_.size()) {
        const std::uint32_t code = trail_[xhead_++];
        if (!matrix_.assign(code_var(code), !code_negative(code))) return false;
      }
      bool ok = true;
      matrix_.for_each_unit([&](Var v, bool value) {
        if (!ok) return;
        if (assign_[v] == kUnassigned) {
          ++propagations_;
          enqueue(2 * v + (value ? 0u : 1u));
        } else if ((assign_[v] == 1) != value) {
          ok = false;
        }
      });
      if (!ok) return false;
      charge();
      if (qhead_ == trail_.size() && xhead_ == trail_.size()) return true;
    }
  }

  bool propagate_clauses() {
    std::vector<std::uint32_t>& lits = s_.clause_lits_;
    while (qhead_ < trail_.size()) {
      const std::uint32_t false_code = trail_[qhead_++] ^ 1u;
      std::vector<std::uint32_t>& ws = watches_[false_code];
      std::size_t keep = 0;
      for (std::size_t i = 0; i < ws.size(); ++i) {
        const std::uint32_t c = ws[i];
        const ClauseSpan& cs = s_.clauses_[c];
        std::uint32_t* cl = lits.data() + cs.start;
        if (cl[0] == false_code) std::swap(cl[0], cl[1]);
        if (value_true(cl[0])) {
          ws[keep++] = c;
          continue;
        }
        bool moved = false;
        for (std::uint32_t k = 2; k < cs.size; ++k) {
          if (!value_false(cl[k])) {
            std::swap(cl[1], cl[k]);
            watches_[cl[1]].push_back(c);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[keep++] = c;
        if (value_false(cl[0])) {
          for (++i; i < ws.size(); ++i) ws[keep++] = ws[i];
          ws.resize(keep);
          return false;
        }
        ++propagations_;
        enqueue(cl[0]);
      }
      ws.resize(keep);
    }
    return true;
  }

  Solver& s_;
  Var n_;
  SolveBudget budget_;
  std::span<const XorConstraint> extra_;
  std::vector<std::int8_t> assign_;
  std::vector<std::vector<std::uint32_t>> watches_;
  std::vector<std::uint32_t> trail_;
  std::size_t qhead_ = 0;
  std::size_t xhead_ = 0;
  std::vector<Level> levels_;
  std::vector<Var> order_;
  XorMatrix matrix_;
  std::uint64_t decisions_ = 0;
  std::uint64_t propagations_ = 0;
};

Solver::Solver(const CnfFormula& formula)
    : num_vars_(formula.num_vars()), occurrences_(formula.num_vars() + 1, 0) {
  for (const Clause& c : formula.clauses()) add_clause(c.literals);
  for (const XorConstraint& x : formula.xors()) add_xor(x);
}

void Solver::add_clause(std::span<const Literal> literals) {
  if (literals.empty()) {
    has_empty_clause_ = true;
    return;
  }
  for (Literal lit : literals) {
    if (lit == 0 || var_of(lit) > num_vars_) {
      throw std::invalid_argument("clause literal out of range");
    }
  }
  // Tautologies never constrain the search.
  for (Literal lit : literals) {
    if (std::find(literals.begin(), literals.end(), -lit) != literals.end()) return;
  }
  for (Literal lit : literals) ++occurrences_[var_of(lit)];
  if (literals.size() == 1) {
    units_.push_back(encode(literals[0]));
    return;
  }
  const auto start = static_cast<std::uint32_t>(clause_lits_.size());
  for (Literal lit : literals) clause_lits_.push_back(encode(lit));
  clauses_.push_back({start, static_cast<std::uint32_t>(literals.size())});
}

void Solver::add_xor(const XorConstraint& constraint) {
  for (Var v : constraint.vars) {
    if (v == 0 || v > num_vars_) throw std::invalid_argument("xor variable out of range");
    ++occurrences_[v];
  }
  xors_.push_back(constraint);
}

SolveResult Solver::solve(std::span<const Literal> assumptions,
                          std::span<const XorConstraint> extra_xors, SolveBudget budget) {
  for (const XorConstraint& x : extra_xors) {
    for (Var v : x.vars) {
      if (v == 0 || v > num_vars_) throw std::invalid_argument("xor variable out of range");
    }
  }
  Search search(*this, extra_xors, budget);
  return search.run(assumptions);
}

SolveResult solve(const CnfFormula& formula, std::span<const Literal> assumptions,
                  SolveBudget budget) {
  Solver solver(formula);
  return solver.solve(assumptions, {}, budget);
}

bool evaluate(const CnfFormula& formula, const Assignment& assignment) {
  if (assignment.num_vars() < formula.num_vars()) {
    throw std::invalid_argument("assignment does not cover every variable");
  }
  for (const Clause& c : formula.clauses()) {
    const bool satisfied = std::any_of(c.literals.begin(), c.literals.end(),
                                       [&](Literal l) { return assignment.satisfies(l); });
    if (!satisfied) return false;
  }
  for (const XorConstraint& x : formula.xors()) {
    bool parity = false;
    for (Var v : x.vars) parity ^= assignment[v];
    if (parity != x.rhs) return false;
  }
  return true;
}

}  // namespace stac
