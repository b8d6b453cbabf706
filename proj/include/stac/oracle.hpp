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
#include <span>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

#include "stac/formula.hpp"
#include "stac/solver.hpp"

namespace stac {

using ModelCount = boost::multiprecision::cpp_int;

/// Raised instead of returning a truncated count.
class CountRefused : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExactCountOptions {
  /// Formulas with at most this many variables are counted by enumerating all
  /// 2^n assignments; larger ones fall back to blocking-clause enumeration.
  Var exhaustive_cap = 26;
  /// Blocking-clause enumeration refuses once this many models were found.
  std::uint64_t enumeration_cap = 1'000'000;
  /// Threads for the exhaustive path (0 picks hardware concurrency).
  unsigned workers = 1;
  /// Skip the exhaustive path even when n is small (for cross-checking).
  bool force_enumeration = false;
};

/// Exact model count #F.
ModelCount count_exact(const CnfFormula& formula, const ExactCountOptions& options = {});

/// Exhaustive count over all assignments in Gray-code order, updating clause
/// and parity state incrementally on each single-variable flip.
std::uint64_t count_exhaustive(const CnfFormula& formula, unsigned workers = 1);

/// Repeated solve + full-assignment blocking clause. Throws CountRefused when
/// more than `cap` models exist.
std::uint64_t count_by_enumeration(const CnfFormula& formula, std::uint64_t cap,
                                   SolveBudget budget = std::nullopt);

struct CountingResult {
  std::uint64_t count = 0;  // min(p - 1, #F)
  std::uint64_t solve_calls = 0;
};

/// Bounded enumeration query: min(p - 1, #F), using at most p solve calls.
/// p = 1 is accepted and yields 0; p = 0 is rejected.
CountingResult counting_query(const CnfFormula& formula, std::uint64_t p,
                              SolveBudget budget = std::nullopt);

/// Same query on `base` strengthened by `extra_xors`; `base` is not modified.
CountingResult counting_query(const Solver& base, std::span<const XorConstraint> extra_xors,
                              std::uint64_t p, SolveBudget budget = std::nullopt);

}  // namespace stac
