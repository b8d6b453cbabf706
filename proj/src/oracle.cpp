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

#include "stac/oracle.hpp"

#include <bit>
#include <thread>
#include <vector>

namespace stac {

namespace {

struct Occurrence {
  std::uint32_t clause;
  bool positive;
};

/// Counts models with variables above `low_vars` fixed from `prefix`, walking
/// the low variables in Gray-code order.
std::uint64_t count_block(const CnfFormula& f, Var low_vars, std::uint64_t prefix) {
  const Var n = f.num_vars();
  std::vector<bool> value(n + 1, false);
  for (Var v = low_vars + 1; v <= n; ++v) value[v] = (prefix >> (v - low_vars - 1)) & 1u;

  const auto& clauses = f.clauses();
  const auto& xors = f.xors();
  std::vector<std::vector<Occurrence>> clause_occ(n + 1);
  std::vector<std::vector<std::uint32_t>> xor_occ(n + 1);
  std::vector<std::uint32_t> true_count(clauses.size(), 0);
  std::vector<std::uint8_t> parity(xors.size(), 0);
  std::size_t unsat_clauses = 0;
  std::size_t bad_xors = 0;

  for (std::uint32_t c = 0; c < clauses.size(); ++c) {
    for (Literal lit : clauses[c].literals) {
      clause_occ[var_of(lit)].push_back({c, lit > 0});
      if (value[var_of(lit)] == (lit > 0)) ++true_count[c];
    }
    if (true_count[c] == 0) ++unsat_clauses;
  }
  for (std::uint32_t x = 0; x < xors.size(); ++x) {
    bool p = false;
    for (Var v : xors[x].vars) {
      xor_occ[v].push_back(x);
      p ^= value[v];
    }
    parity[x] = p;
    if (p != xors[x].rhs) ++bad_xors;
  }

  std::uint64_t models = (unsat_clauses == 0 && bad_xors == 0) ? 1 : 0;
  const std::uint64_t steps = std::uint64_t{1} << low_vars;
  for (std::uint64_t i = 1; i < steps; ++i) {
    const Var v = static_cast<Var>(std::countr_zero(i)) + 1;
    const bool now = !value[v];
    value[v] = now;
    for (const Occurrence& o : clause_occ[v]) {
      if (o.positive == now) {
        if (true_count[o.clause]++ == 0) --unsat_clauses;
      } else {
        if (--true_count[o.clause] == 0) ++unsat_clauses;
      }
    }
    for (std::uint32_t x : xor_occ[v]) {
      const bool was_ok = parity[x] == xors[x].rhs;
      parity[x] ^= 1;
      if (was_ok) {
        ++bad_xors;
      } else {
        --bad_xors;
      }
    }
    if (unsat_clauses == 0 && bad_xors == 0) ++models;
  }
  return models;
}

}  // namespace

std::uint64_t count_exhaustive(const CnfFormula& formula, unsigned workers) {
  if (formula.num_vars() > 62) throw CountRefused("too many variables for exhaustive count");
  if (formula.trivially_unsat()) return 0;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());

  const Var n = formula.num_vars();
  Var split = 0;
  while ((1u << split) < workers && split + 8 < n) ++split;
  const std::uint64_t blocks = std::uint64_t{1} << split;
  const Var low = n - split;

  if (blocks == 1) return count_block(formula, low, 0);

  std::vector<std::uint64_t> partial(blocks, 0);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::uint64_t b = w; b < blocks; b += workers) {
        partial[b] = count_block(formula, low, b);
      }
    });
  }
  for (auto& t : pool) t.join();
  std::uint64_t total = 0;
  for (std::uint64_t p : partial) total += p;
  return total;
}

std::uint64_t count_by_enumeration(const CnfFormula& formula, std::uint64_t cap,
                                   SolveBudget budget) {
  Solver solver(formula);
  std::vector<Literal> block(formula.num_vars());
  std::uint64_t models = 0;
  for (;;) {
    const SolveResult r = solver.solve({}, {}, budget);
    if (!r.sat) return models;
    if (++models > cap) {
      throw CountRefused("model count exceeds enumeration cap of " + std::to_string(cap));
    }
    for (Var v = 1; v <= formula.num_vars(); ++v) {
      const Literal lit = static_cast<Literal>(v);
      block[v - 1] = (*r.witness)[v] ? -lit : lit;
    }
    solver.add_clause(block);
  }
}

ModelCount count_exact(const CnfFormula& formula, const ExactCountOptions& options) {
  if (!options.force_enumeration && formula.num_vars() <= options.exhaustive_cap) {
    return ModelCount(count_exhaustive(formula, options.workers));
  }
  return ModelCount(count_by_enumeration(formula, options.enumeration_cap));
}

CountingResult counting_query(const Solver& base, std::span<const XorConstraint> extra_xors,
                              std::uint64_t p, SolveBudget budget) {
  if (p == 0) throw std::invalid_argument("counting_query: threshold must be positive");
  CountingResult result;
  if (p == 1) return result;
  Solver solver = base;
  const Var n = solver.num_vars();
  std::vector<Literal> block(n);
  while (result.count < p - 1) {
    ++result.solve_calls;
    const SolveResult r = solver.solve({}, extra_xors, budget);
    if (!r.sat) break;
    ++result.count;
    for (Var v = 1; v <= n; ++v) {
      const Literal lit = static_cast<Literal>(v);
      block[v - 1] = (*r.witness)[v] ? -lit : lit;
    }
    solver.add_clause(block);
  }
  return result;
}

CountingResult counting_query(const CnfFormula& formula, std::uint64_t p, SolveBudget budget) {
  return counting_query(Solver(formula), {}, p, budget);
}

}  // namespace stac
