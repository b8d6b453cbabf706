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

#include "stac/stac.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stac {

void DepthHistogram::record(unsigned depth) {
  if (c_.size() < depth) c_.resize(depth, 0);
  for (unsigned i = 0; i < depth; ++i) ++c_[i];
  ++runs_;
}

void DepthHistogram::merge(const DepthHistogram& other) {
  if (c_.size() < other.c_.size()) c_.resize(other.c_.size(), 0);
  for (std::size_t i = 0; i < other.c_.size(); ++i) c_[i] += other.c_[i];
  runs_ += other.runs_;
}

DepthHistogram DepthHistogram::from_counts(std::vector<std::uint64_t> c, std::uint64_t runs) {
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] > runs) throw std::invalid_argument("histogram entry exceeds run count");
    if (i > 0 && c[i] > c[i - 1]) throw std::invalid_argument("histogram must be non-increasing");
  }
  while (!c.empty() && c.back() == 0) c.pop_back();
  DepthHistogram h;
  h.c_ = std::move(c);
  h.runs_ = runs;
  return h;
}

void LeapFrogState::observe(unsigned depth) {
  ++invocations;
  mean_depth += (static_cast<double>(depth) - mean_depth) / static_cast<double>(invocations);
}

DepthProbe get_depth(Solver& solver, LazyChain& chain, LeapFrogState* leap, SolveBudget budget) {
  DepthProbe probe;
  auto unsat_at = [&](unsigned i) {
    ++probe.queries;
    return !solver.solve({}, chain.prefix(i), budget).sat;
  };

  unsigned low = 0;
  if (leap != nullptr && leap->invocations > 0) {
    const long rounded = std::lround(leap->mean_depth);
    low = static_cast<unsigned>(std::max(0L, rounded - static_cast<long>(leap->offset)));
  }

  // Smallest depth already known to be unsatisfiable, if any.
  std::optional<unsigned> known_unsat;
  while (unsat_at(low)) {
    known_unsat = low;
    if (low == 0) {
      probe.depth = 0;
      if (leap != nullptr) leap->observe(0);
      return probe;
    }
    low = low > leap->offset ? low - leap->offset : 0;
  }
  unsigned i = low + 1;
  while (!known_unsat || i < *known_unsat) {
    if (unsat_at(i)) break;
    ++i;
  }
  probe.depth = i;
  if (leap != nullptr) leap->observe(i);
  return probe;
}

unsigned select_depth(const DepthHistogram& histogram) {
  const double half = static_cast<double>(histogram.runs()) / 2.0;
  if (histogram.at(0) == 0) return 0;
  unsigned best = 1;
  double best_gap = std::abs(static_cast<double>(histogram.at(1)) - half);
  for (std::size_t d = 2; d <= histogram.size(); ++d) {
    const double gap = std::abs(static_cast<double>(histogram.at(d)) - half);
    if (gap < best_gap) {
      best_gap = gap;
      best = static_cast<unsigned>(d);
    }
  }
  return best;
}

std::optional<CountInterval> count_interval(unsigned d, const ConfidenceInterval& ci) {
  if (d == 0 || !(ci.lower > 0.0)) return std::nullopt;
  constexpr double kFloor = 1e-12;
  const double lower = std::max(ci.lower, kFloor);
  const double log_base = std::log1p(-std::ldexp(1.0, -static_cast<int>(d)));
  CountInterval out;
  out.upper = std::log(lower) / log_base;
  out.lower = ci.upper >= 1.0 ? 0.0 : std::log(ci.upper) / log_base;
  return out;
}

CountEstimate estimate_from_histogram(const DepthHistogram& histogram) {
  CountEstimate result;
  result.runs_used = histogram.runs();
  const unsigned d = select_depth(histogram);
  result.chosen_d = d;
  if (d == 0 || histogram.runs() == 0) return result;

  const double t = static_cast<double>(histogram.runs());
  double proportion = (t - static_cast<double>(histogram.at(d))) / t;
  proportion = std::clamp(proportion, 1.0 / (2 * t), 1.0 - 1.0 / (2 * t));
  result.estimate = *estimate_count(d, proportion);
  return result;
}

namespace {

void require_runs(std::uint64_t T) {
  if (T == 0) throw std::invalid_argument("T must be at least 1");
  if (T > UINT32_MAX) throw std::invalid_argument("T too large");
}

}  // namespace

CountEstimate stac(const CnfFormula& formula, std::uint64_t T, const StacOptions& options) {
  require_runs(T);
  Solver solver(formula);
  LeapFrogState leap{.offset = options.offset};
  DepthHistogram histogram;
  std::uint64_t queries = 0;
  for (std::uint64_t run = 0; run < T; ++run) {
    LazyChain chain(formula.num_vars(), options.seed, static_cast<std::uint32_t>(run));
    const DepthProbe probe =
        get_depth(solver, chain, options.leapfrog ? &leap : nullptr, options.budget);
    histogram.record(probe.depth);
    queries += probe.queries;
  }
  CountEstimate result = estimate_from_histogram(histogram);
  result.sat_queries = queries;
  return result;
}

std::optional<StopDecision> check_stop(const DepthHistogram& histogram, double epsilon, double z,
                                       IntervalMethod method) {
  const std::uint64_t t = histogram.runs();
  for (std::size_t d = 1; d < histogram.size(); ++d) {
    const std::uint64_t c = histogram.at(d);
    if (c == 0 || c >= t) continue;
    const double q = static_cast<double>(t - c) / static_cast<double>(t);
    const auto depth = static_cast<unsigned>(d);
    const double m = *estimate_count(depth, q);
    const auto interval = count_interval(depth, proportion_interval(method, q, t, z));
    if (!interval) continue;
    if (interval->upper < (1 + epsilon) * m && interval->lower > m / (1 + epsilon)) {
      return StopDecision{depth, m, *interval};
    }
  }
  return std::nullopt;
}

CountEstimate stac_dsc(const CnfFormula& formula, std::uint64_t T, const DscOptions& options) {
  require_runs(T);
  options.params.validate();
  if (options.check_every == 0) throw std::invalid_argument("check_every must be positive");
  const double z = z_for_delta(options.params.delta);

  Solver solver(formula);
  LeapFrogState leap{.offset = options.stac.offset};
  DepthHistogram histogram;
  std::uint64_t queries = 0;
  for (std::uint64_t run = 0; run < T; ++run) {
    LazyChain chain(formula.num_vars(), options.stac.seed, static_cast<std::uint32_t>(run));
    const DepthProbe probe =
        get_depth(solver, chain, options.stac.leapfrog ? &leap : nullptr, options.stac.budget);
    histogram.record(probe.depth);
    queries += probe.queries;
    if ((run + 1) % options.check_every != 0) continue;
    if (auto stop = check_stop(histogram, options.params.epsilon, z, options.method)) {
      CountEstimate result;
      result.estimate = stop->estimate;
      result.chosen_d = stop->d;
      result.runs_used = run + 1;
      result.sat_queries = queries;
      result.interval = stop->interval;
      result.stopped_early = true;
      return result;
    }
  }

  CountEstimate result = estimate_from_histogram(histogram);
  result.sat_queries = queries;
  if (result.chosen_d > 0) {
    const double t = static_cast<double>(histogram.runs());
    const double q = (t - static_cast<double>(histogram.at(result.chosen_d))) / t;
    result.interval = count_interval(result.chosen_d,
                                     proportion_interval(options.method, q, histogram.runs(), z));
  }
  return result;
}

}  // namespace stac
