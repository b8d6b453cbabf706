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

#include "stac/approxmc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stac {

std::uint64_t default_pivot(double epsilon) {
  if (!(epsilon > 0)) throw std::invalid_argument("epsilon must be positive");
  const double base = 1.0 + 1.0 / epsilon;
  return static_cast<std::uint64_t>(std::ceil(9.84 * base * base));
}

CoreResult approxmc_core(const Solver& solver, LazyChain& chain, std::uint64_t pivot,
                         SolveBudget budget) {
  if (pivot == 0) throw std::invalid_argument("pivot must be at least 1");
  CoreResult result;
  for (unsigned i = 0;; ++i) {
    const CountingResult cell = counting_query(solver, chain.prefix(i), pivot + 2, budget);
    result.solve_calls += cell.solve_calls;
    if (cell.count <= pivot) {
      result.depth = i;
      result.value = ModelCount(cell.count) << i;
      return result;
    }
  }
}

ModelCount find_median(std::vector<ModelCount> values) {
  std::erase(values, ModelCount(0));
  if (values.empty()) return 0;
  std::sort(values.begin(), values.end());
  return values[(values.size() - 1) / 2];
}

ApproxMcResult approxmc(const CnfFormula& formula, const ApproxMcOptions& options) {
  if (options.T == 0) throw std::invalid_argument("T must be at least 1");
  const Solver solver(formula);
  ApproxMcResult result;
  for (std::uint64_t run = 0; run < options.T; ++run) {
    LazyChain chain(formula.num_vars(), options.seed, static_cast<std::uint32_t>(run));
    const CoreResult core = approxmc_core(solver, chain, options.pivot, options.budget);
    result.core_values.push_back(core.value);
    result.solve_calls += core.solve_calls;
    ++result.runs;
  }
  result.estimate = find_median(result.core_values);
  return result;
}

}  // namespace stac
