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

#include <gtest/gtest.h>

#include <cmath>

#include "stac/stac.hpp"
#include "stac/stats.hpp"
#include "test_util.hpp"

namespace stac {
namespace {

const CnfFormula kUnsat(3, {Clause{{1}}, Clause{{-1}}});

TEST(DepthHistogram, RecordKeepsNonIncreasing) {
  RngStream rng(1, StreamDomain::kMisc);
  DepthHistogram h;
  for (int i = 0; i < 2000; ++i) {
    h.record(static_cast<unsigned>(rng.uniform_below(20)));
    for (std::size_t d = 0; d <= h.size(); ++d) {
      ASSERT_LE(h.at(d), h.runs());
      if (d > 0) ASSERT_LE(h.at(d), h.at(d - 1));
    }
  }
}

TEST(DepthHistogram, CountsRunsDeeperThanIndex) {
  DepthHistogram h;
  for (unsigned d : {0u, 2u, 2u, 5u}) h.record(d);
  EXPECT_EQ(h.runs(), 4u);
  EXPECT_EQ(h.at(0), 3u);
  EXPECT_EQ(h.at(1), 3u);
  EXPECT_EQ(h.at(2), 1u);
  EXPECT_EQ(h.at(4), 1u);
  EXPECT_EQ(h.at(5), 0u);
}

TEST(DepthHistogram, MergeIsOrderIndependent) {
  RngStream rng(2, StreamDomain::kMisc);
  std::vector<DepthHistogram> parts(5);
  DepthHistogram all;
  for (int i = 0; i < 300; ++i) {
    const auto d = static_cast<unsigned>(rng.uniform_below(12));
    parts[i % 5].record(d);
    all.record(d);
  }
  DepthHistogram forward, backward;
  for (int i = 0; i < 5; ++i) forward.merge(parts[i]);
  for (int i = 4; i >= 0; --i) backward.merge(parts[i]);
  EXPECT_EQ(forward, all);
  EXPECT_EQ(backward, all);
}

TEST(DepthHistogram, FromCountsValidates) {
  EXPECT_THROW(DepthHistogram::from_counts({3, 4}, 5), std::invalid_argument);
  EXPECT_THROW(DepthHistogram::from_counts({6}, 5), std::invalid_argument);
  EXPECT_EQ(DepthHistogram::from_counts({5, 2, 0, 0}, 5).size(), 2u);
}

TEST(SelectDepth, InjectedHistogram) {
  const auto h = DepthHistogram::from_counts({8, 6, 4, 1, 0}, 8);
  EXPECT_EQ(select_depth(h), 2u);
  const CountEstimate e = estimate_from_histogram(h);
  EXPECT_EQ(e.chosen_d, 2u);
  EXPECT_NEAR(e.estimate, std::log(0.5) / std::log(0.75), 1e-12);
  EXPECT_NEAR(e.estimate, 2.409, 1e-3);
}

TEST(SelectDepth, ArgminProperty) {
  RngStream rng(3, StreamDomain::kMisc);
  for (int trial = 0; trial < 1000; ++trial) {
    DepthHistogram h;
    const auto T = 1 + rng.uniform_below(40);
    const auto center = rng.uniform_below(10);
    for (std::uint64_t r = 0; r < T; ++r) {
      h.record(static_cast<unsigned>(center + rng.uniform_below(6)));
    }
    const unsigned d = select_depth(h);
    const double half = static_cast<double>(T) / 2;
    for (std::size_t k = 0; k <= h.size() + 1; ++k) {
      ASSERT_LE(std::abs(h.at(d) - half), std::abs(h.at(k) - half));
    }
    const CountEstimate e = estimate_from_histogram(h);
    ASSERT_EQ(e.estimate == 0.0, e.chosen_d == 0);
  }
}

TEST(GetDepth, UnsatFormula) {
  Solver solver(kUnsat);
  LazyChain chain(3, 1, 0);
  const DepthProbe p = get_depth(solver, chain);
  EXPECT_EQ(p.depth, 0u);
  EXPECT_EQ(p.queries, 1u);
}

TEST(GetDepth, SingleModelMedianDepth) {
  const CnfFormula f = generate_fixed_count(10, 0);
  ASSERT_EQ(testing::brute_count(f), 1u);
  Solver solver(f);
  int at_most_one = 0;
  for (std::uint32_t r = 0; r < 2000; ++r) {
    LazyChain chain(10, 55, r);
    at_most_one += get_depth(solver, chain).depth <= 1;
  }
  EXPECT_NEAR(at_most_one / 2000.0, 0.5, 0.035);
}

TEST(GetDepth, ReturnsMinimalUnsatPrefix) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const CnfFormula f = generate_random_3cnf(10, 20, seed);
    Solver solver(f);
    LazyChain chain(10, seed, 0);
    const unsigned depth = get_depth(solver, chain).depth;
    for (unsigned d = 0; d < depth; ++d) {
      ASSERT_GT(testing::brute_count(f.with_xors({chain.prefix(d).begin(), chain.prefix(d).end()})), 0u);
    }
    ASSERT_EQ(testing::brute_count(
                  f.with_xors({chain.prefix(depth).begin(), chain.prefix(depth).end()})),
              0u);
  }
}

TEST(GetDepth, LeapFrogMatchesNaive) {
  int paired = 0;
  for (std::uint64_t k = 0; k < 500; ++k) {
    const auto n = static_cast<Var>(3 + k % 10);
    const CnfFormula f = generate_random_3cnf(n, static_cast<std::uint32_t>(k % 3 * n), k);
    Solver solver(f);
    LeapFrogState leap{.offset = static_cast<unsigned>(1 + k % 5)};
    // Warm the state with a skewed mean so later probes start high and jump down.
    leap.observe(static_cast<unsigned>(k % 17));
    for (std::uint32_t r = 0; r < 3; ++r) {
      LazyChain naive_chain(n, k, r);
      LazyChain leap_chain(n, k, r);
      const DepthProbe naive = get_depth(solver, naive_chain);
      const DepthProbe jumped = get_depth(solver, leap_chain, &leap);
      ASSERT_EQ(naive.depth, jumped.depth) << "formula " << k << " run " << r;
      ++paired;
    }
  }
  EXPECT_GE(paired, 500);
}

TEST(Stac, UnsatGivesZero) {
  const CountEstimate e = stac(kUnsat, 9, {});
  EXPECT_EQ(e.estimate, 0.0);
  EXPECT_EQ(e.chosen_d, 0u);
  EXPECT_EQ(e.runs_used, 9u);
  EXPECT_EQ(e.sat_queries, 9u);
}

TEST(Stac, LeapFrogDoesNotChangeEstimate) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const CnfFormula f = generate_random_3cnf(14, 40, seed);
    const CountEstimate warm = stac(f, 22, {.seed = seed, .leapfrog = true});
    const CountEstimate cold = stac(f, 22, {.seed = seed, .leapfrog = false});
    EXPECT_EQ(warm.estimate, cold.estimate);
    EXPECT_EQ(warm.chosen_d, cold.chosen_d);
    EXPECT_GE(warm.sat_queries, warm.runs_used);
  }
}

TEST(Stac, QueryAccounting) {
  const CnfFormula f = generate_random_3cnf(12, 30, 4);
  Solver solver(f);
  LeapFrogState leap;
  std::uint64_t queries = 0;
  DepthHistogram h;
  for (std::uint32_t r = 0; r < 22; ++r) {
    LazyChain chain(12, 8, r);
    const DepthProbe p = get_depth(solver, chain, &leap);
    queries += p.queries;
    h.record(p.depth);
  }
  const CountEstimate e = stac(f, 22, {.seed = 8});
  EXPECT_EQ(e.sat_queries, queries);
  EXPECT_EQ(e.estimate, estimate_from_histogram(h).estimate);
}

TEST(CheckStop, WorkedExample) {
  const auto h = DepthHistogram::from_counts({100, 75, 20, 3}, 100);
  const auto stop = check_stop(h, 0.8, 1.2816, IntervalMethod::kNormal);
  ASSERT_TRUE(stop);
  EXPECT_EQ(stop->d, 1u);
  EXPECT_NEAR(stop->estimate, 2.0, 1e-12);
  EXPECT_NEAR(stop->interval.upper, std::log(0.25 - 1.2816 * std::sqrt(0.25 * 0.75 / 100)) /
                                        std::log(0.5), 1e-12);
  EXPECT_NEAR(stop->interval.upper, 2.362, 1e-3);
  EXPECT_NEAR(stop->interval.lower, 1.711, 1e-3);
}

TEST(CheckStop, DegenerateProportionsSkipped) {
  EXPECT_FALSE(check_stop(DepthHistogram::from_counts({5, 5, 5}, 5), 0.8, 1.28,
                          IntervalMethod::kWilson));
  EXPECT_FALSE(check_stop(DepthHistogram::from_counts({3, 1}, 3), 0.8, 1.28,
                          IntervalMethod::kWilson));
}

TEST(StacDsc, UnsatFallsThrough) {
  const CountEstimate e = stac_dsc(kUnsat, 22, {});
  EXPECT_EQ(e.estimate, 0.0);
  EXPECT_FALSE(e.stopped_early);
  EXPECT_EQ(e.runs_used, 22u);
}

TEST(StacDsc, StopsEarlyAndIsDeterministic) {
  const CnfFormula f = generate_random_3cnf(16, 45, 4);
  const DscOptions options{.stac = {.seed = 3}, .params = {0.8, 0.2}};
  const CountEstimate a = stac_dsc(f, 22, options);
  const CountEstimate b = stac_dsc(f, 22, options);
  EXPECT_EQ(a.estimate, b.estimate);
  EXPECT_EQ(a.runs_used, b.runs_used);
  EXPECT_GE(a.sat_queries, a.runs_used);
  if (a.stopped_early) {
    ASSERT_TRUE(a.interval);
    EXPECT_LT(a.interval->upper, 1.8 * a.estimate);
    EXPECT_GT(a.interval->lower, a.estimate / 1.8);
  }
}

TEST(StacDsc, BatchedCheckRespectsStride) {
  const CnfFormula f = generate_random_3cnf(16, 45, 4);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const CountEstimate e = stac_dsc(
        f, 22, {.stac = {.seed = seed}, .params = {0.8, 0.2}, .check_every = 4});
    EXPECT_TRUE(e.runs_used % 4 == 0 || e.runs_used == 22) << e.runs_used;
  }
}

}  // namespace
}  // namespace stac
