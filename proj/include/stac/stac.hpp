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
#include <vector>

#include "stac/formula.hpp"
#include "stac/hashing.hpp"
#include "stac/solver.hpp"
#include "stac/stats.hpp"

namespace stac {

/// c[i] counts the runs whose depth exceeds i; runs is t.
class DepthHistogram {
 public:
  void record(unsigned depth);
  /// Associative, order-independent merge of two disjoint sets of runs.
  void merge(const DepthHistogram& other);

  std::uint64_t at(std::size_t i) const { return i < c_.size() ? c_[i] : 0; }
  std::uint64_t runs() const { return runs_; }
  /// One past the deepest index with a non-zero entry.
  std::size_t size() const { return c_.size(); }

  /// Builds a histogram from explicit counts; throws if they are not
  /// non-increasing or exceed `runs`.
  static DepthHistogram from_counts(std::vector<std::uint64_t> c, std::uint64_t runs);

  friend bool operator==(const DepthHistogram&, const DepthHistogram&) = default;

 private:
  std::vector<std::uint64_t> c_;
  std::uint64_t runs_ = 0;
};

/// Running mean of returned depths, used to start probing near the expected
/// depth instead of at 0.
struct LeapFrogState {
  double mean_depth = 0.0;
  std::uint64_t invocations = 0;
  unsigned offset = 5;

  void observe(unsigned depth);
};

struct DepthProbe {
  unsigned depth = 0;
  std::uint64_t queries = 0;
};

/// Smallest i such that base AND H_1..H_i is unsatisfiable, for the chain
/// `chain`. With a warm leap-frog state the probe starts at
/// round(mean) - offset, jumps down by offset while unsatisfiable, then scans
/// upward; the answer is the same as the plain upward scan because the chain
/// is fixed and unsatisfiability is monotone along it.
DepthProbe get_depth(Solver& solver, LazyChain& chain, LeapFrogState* leap = nullptr,
                     SolveBudget budget = std::nullopt);

struct CountInterval {
  double lower = 0.0;
  double upper = 0.0;
};

struct CountEstimate {
  double estimate = 0.0;
  unsigned chosen_d = 0;
  std::uint64_t runs_used = 0;
  std::uint64_t sat_queries = 0;
  std::optional<CountInterval> interval;
  bool stopped_early = false;
};

struct StacOptions {
  std::uint64_t seed = 0;
  bool leapfrog = true;
  unsigned offset = 5;
  SolveBudget budget = std::nullopt;
};

/// Depth whose count is closest to runs/2, ties to the smaller depth. Depth 0
/// is only returned when no run was satisfiable at depth 0.
unsigned select_depth(const DepthHistogram& histogram);

/// log_{1 - 2^-d}((t - c[d]) / t) at the selected depth, 0 when d = 0. A
/// degenerate proportion of 0 or 1 is pulled in to 1/(2t) from the boundary.
CountEstimate estimate_from_histogram(const DepthHistogram& histogram);

/// Count interval implied by a proportion interval at depth d:
/// [log_b(upper), log_b(lower)] with b = 1 - 2^-d. Empty when the lower end
/// is not positive.
std::optional<CountInterval> count_interval(unsigned d, const ConfidenceInterval& ci);

/// Static-T counter: T independent GetDepth runs, then estimate.
CountEstimate stac(const CnfFormula& formula, std::uint64_t T, const StacOptions& options = {});

struct DscOptions {
  StacOptions stac;
  AccuracyParams params;
  IntervalMethod method = IntervalMethod::kWilson;
  /// Evaluate the stopping rule after every k-th run.
  std::uint64_t check_every = 1;
};

struct StopDecision {
  unsigned d = 0;
  double estimate = 0.0;
  CountInterval interval;
};

/// Scans depths in ascending order with 0 < c[d] < t and returns the first
/// whose count interval lies strictly inside [M / (1 + eps), (1 + eps) M].
std::optional<StopDecision> check_stop(const DepthHistogram& histogram, double epsilon, double z,
                                       IntervalMethod method);

/// Dynamic-stopping counter: stops as soon as check_stop succeeds, otherwise
/// falls back to the static estimate after T runs.
CountEstimate stac_dsc(const CnfFormula& formula, std::uint64_t T, const DscOptions& options);

}  // namespace stac
