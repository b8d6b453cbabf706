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
#include <vector>

#include "stac/formula.hpp"
#include "stac/hashing.hpp"
#include "stac/oracle.hpp"
#include "stac/solver.hpp"

namespace stac {

/// Default enumeration threshold, ceil(9.84 (1 + 1/eps)^2). A configuration
/// choice for baseline comparisons, not a derived constant.
std::uint64_t default_pivot(double epsilon);

struct CoreResult {
  ModelCount value = 0;  // 2^i * s, or 0 when the cell was empty
  unsigned depth = 0;
  std::uint64_t solve_calls = 0;
};

/// Hashes down until a cell holds at most `pivot` models, then scales the
/// cell count back up. The cell is measured with an enumeration threshold of
/// pivot + 2, so a returned s <= pivot means the cell really is that small.
CoreResult approxmc_core(const Solver& solver, LazyChain& chain, std::uint64_t pivot,
                         SolveBudget budget = std::nullopt);

/// Median of the non-zero entries (lower middle for even length), 0 if none.
ModelCount find_median(std::vector<ModelCount> values);

struct ApproxMcOptions {
  std::uint64_t T = 21;
  std::uint64_t pivot = 50;
  std::uint64_t seed = 0;
  SolveBudget budget = std::nullopt;
};

struct ApproxMcResult {
  ModelCount estimate = 0;
  std::uint64_t runs = 0;
  std::uint64_t solve_calls = 0;
  std::vector<ModelCount> core_values;
};

ApproxMcResult approxmc(const CnfFormula& formula, const ApproxMcOptions& options);

}  // namespace stac
