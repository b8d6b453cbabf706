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

#include <boost/multiprecision/cpp_int.hpp>

#include "stac/rng.hpp"
#include "stac/stats.hpp"

namespace stac {
namespace {

using boost::multiprecision::cpp_rational;

cpp_rational exact_q(unsigned d, unsigned count) {
  cpp_rational base(cpp_rational((1u << d) - 1, 1u << d));
  cpp_rational out = 1;
  for (unsigned i = 0; i < count; ++i) out *= base;
  return out;
}

TEST(QOf, Examples) {
  EXPECT_EQ(q_of(0, 7), 0.0);
  EXPECT_DOUBLE_EQ(q_of(1, 2), 0.25);
  EXPECT_EQ(exact_q(3, 5), cpp_rational(16807, 32768));
  EXPECT_NEAR(q_of(3, 5), 16807.0 / 32768.0, 1e-15);
  EXPECT_EQ(q_of(4, 0), 1.0);
}

TEST(QOf, MatchesExactRationals) {
  for (unsigned d = 1; d <= 10; ++d) {
    for (unsigned c = 0; c <= 60; c += 3) {
      const double expected = exact_q(d, c).convert_to<double>();
      ASSERT_NEAR(q_of(d, c), expected, 1e-14 + 1e-12 * expected);
    }
  }
}

TEST(QOf, LargeCountsStayFinite) {
  const double q = q_of(40, 1e12);
  EXPECT_GT(q, 0.4);
  EXPECT_LT(q, 0.5);
}

TEST(EstimateCount, Examples) {
  EXPECT_NEAR(*estimate_count(1, 0.25), 2.0, 1e-12);
  EXPECT_NEAR(*estimate_count(2, 0.5625), 2.0, 1e-12);
  EXPECT_NEAR(*estimate_count(3, 0.512909), 5.0, 1e-3);
  EXPECT_FALSE(estimate_count(2, 0.0));
  EXPECT_FALSE(estimate_count(2, 1.0));
  EXPECT_THROW(estimate_count(0, 0.5), std::domain_error);
}

TEST(EstimateCount, InvertsQOf) {
  for (unsigned d = 1; d <= 30; ++d) {
    for (double c : {1.0, 2.0, 3.0, 7.0, 10.0, 99.0, 500.0, 1234.0, 5000.0, 10000.0}) {
      const double q = q_of(d, c);
      if (!(q > 0.0 && q < 1.0)) continue;
      ASSERT_NEAR(*estimate_count(d, q) / c, 1.0, 1e-6) << "d=" << d << " c=" << c;
    }
  }
}

TEST(NormalQuantile, References) {
  EXPECT_EQ(normal_quantile(0.5), 0.0);
  EXPECT_NEAR(normal_quantile(0.9), 1.2815515655446004, 1e-9);
  EXPECT_NEAR(normal_quantile(0.95), 1.6448536269514722, 1e-9);
  EXPECT_NEAR(normal_quantile(0.975), 1.959963984540054, 1e-9);
  EXPECT_NEAR(normal_quantile(0.01), -2.3263478740408408, 1e-9);
  EXPECT_NEAR(normal_quantile(1e-10), -6.361340902404056, 1e-8);
  EXPECT_THROW(normal_quantile(0.0), std::domain_error);
  EXPECT_THROW(normal_quantile(1.0), std::domain_error);
}

TEST(NormalQuantile, InvertsCdf) {
  for (double p = 0.001; p < 1.0; p += 0.001) {
    ASSERT_NEAR(normal_cdf(normal_quantile(p)), p, 1e-12);
    ASSERT_NEAR(normal_quantile(p), -normal_quantile(1 - p), 1e-9);
  }
}

TEST(IntervalNormal, Examples) {
  const auto a = interval_normal(0.5, 25, 2.0);
  EXPECT_NEAR(a.lower, 0.3, 1e-12);
  EXPECT_NEAR(a.upper, 0.7, 1e-12);
  const auto b = interval_normal(0.0, 17, 3.0);
  EXPECT_EQ(b.lower, 0.0);
  EXPECT_EQ(b.upper, 0.0);
  const auto c = interval_normal(0.25, 100, 1.2816);
  EXPECT_NEAR(c.lower, 0.25 - 0.0555, 1e-4);
  EXPECT_NEAR(c.upper, 0.25 + 0.0555, 1e-4);
  EXPECT_EQ(interval_normal(0.01, 1, 5).lower, 0.0);
}

TEST(IntervalWilson, Examples) {
  const double z = 1.96;
  const auto a = interval_wilson(0.0, 10, z);
  EXPECT_NEAR(a.lower, 0.0, 1e-15);
  EXPECT_NEAR(a.upper, 0.27754, 1e-5);
  EXPECT_NEAR(a.upper, z * z / (10 + z * z), 1e-12);
  const auto b = interval_wilson(1.0, 10, z);
  EXPECT_NEAR(b.lower, 0.72246, 1e-5);
  EXPECT_NEAR(b.upper, 1.0, 1e-15);
  for (std::uint64_t t : {1u, 5u, 40u}) {
    const auto c = interval_wilson(0.5, t, z);
    const double center = (0.5 + z * z / (2.0 * t)) / (1 + z * z / t);
    EXPECT_NEAR(center - c.lower, c.upper - center, 1e-12);
  }
}

TEST(Intervals, MatchIndependentEvaluation) {
  RngStream rng(17, StreamDomain::kMisc);
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t t = 1 + rng.uniform_below(500);
    const double q = static_cast<double>(rng.uniform_below(t + 1)) / static_cast<double>(t);
    const double z = 0.5 + 3 * rng.next_double();
    // Written out from the textbook forms, not shared with the library.
    const double se = std::sqrt(q * (1 - q) / t);
    const double n_lo = std::max(0.0, q - z * se), n_hi = std::min(1.0, q + z * se);
    const double denom = 1 + z * z / t;
    const double mid = (q + z * z / (2 * t)) / denom;
    const double spread = z * std::sqrt(q * (1 - q) / t + z * z / (4.0 * t * t)) / denom;
    const auto normal = proportion_interval(IntervalMethod::kNormal, q, t, z);
    const auto wilson = proportion_interval(IntervalMethod::kWilson, q, t, z);
    ASSERT_NEAR(normal.lower, n_lo, 1e-9);
    ASSERT_NEAR(normal.upper, n_hi, 1e-9);
    ASSERT_NEAR(wilson.lower, std::max(0.0, mid - spread), 1e-9);
    ASSERT_NEAR(wilson.upper, std::min(1.0, mid + spread), 1e-9);
    ASSERT_LE(wilson.lower, q + 1e-12);
    ASSERT_GE(wilson.upper, q - 1e-12);
    if (q > 0 && q < 1 && n_lo > 0 && n_hi < 1) {
      ASSERT_NEAR((normal.lower + normal.upper) / 2, q, 1e-12);
    }
  }
}

TEST(ComputeT, Table) {
  EXPECT_EQ(compute_T({0.8, 0.2}), 22u);
  EXPECT_NEAR(static_cast<double>(compute_T({0.1, 0.1})), 998.0, 9.98);
  EXPECT_EQ(compute_T({0.1, 0.1}), 1004u);
  EXPECT_EQ(compute_T({0.4, 0.2}), 57u);
  EXPECT_EQ(compute_T({0.2, 0.1}), 289u);
  EXPECT_THROW(compute_T({0.0, 0.2}), std::invalid_argument);
  EXPECT_THROW(compute_T({0.8, 1.0}), std::invalid_argument);
}

TEST(ComputeT, BoundTermsAreUnimodal) {
  for (double eps : {0.1, 0.2, 0.4, 0.8, 1.5}) {
    const double turn1 = std::pow(1 + eps, -1 / eps);
    const double turn2 = std::pow(1 + eps, -(1 + eps) / eps);
    double prev1 = INFINITY, prev2 = INFINITY;
    for (int i = 1; i < 1000; ++i) {
      const double q = i / 1000.0;
      const double f1 = t_bound_first(q, eps, 1.0);
      const double f2 = t_bound_second(q, eps, 1.0);
      if (q <= turn1) {
        ASSERT_LT(f1, prev1) << "eps=" << eps << " q=" << q;
      } else if (q - 1e-3 >= turn1) {
        ASSERT_GT(f1, prev1) << "eps=" << eps << " q=" << q;
      }
      if (q <= turn2) {
        ASSERT_LT(f2, prev2) << "eps=" << eps << " q=" << q;
      } else if (q - 1e-3 >= turn2) {
        ASSERT_GT(f2, prev2) << "eps=" << eps << " q=" << q;
      }
      prev1 = f1;
      prev2 = f2;
    }
  }
}

TEST(Windows, Examples) {
  for (double c : {6.0, 1e6}) {
    const auto w = qd_window_exists(c);
    ASSERT_TRUE(w);
    EXPECT_GE(w->q, 0.4);
    EXPECT_LE(w->q, 0.65);
    EXPECT_DOUBLE_EQ(w->q, q_of(w->d, c));
  }
  for (double c : {1.0, 1e3, 1e9}) {
    const auto d = depth_window(c);
    ASSERT_TRUE(d) << c;
    EXPECT_LT(q_of(*d, c), 0.05);
    EXPECT_GT(q_of(*d + 7, c), 0.95);
  }
  EXPECT_DOUBLE_EQ(q_of(4, 1), 0.9375);
}

TEST(Windows, HoldForRandomCounts) {
  RngStream rng(31, StreamDomain::kMisc);
  for (int i = 0; i < 1000; ++i) {
    // Half log-uniform, half uniform on (5, 1e9].
    const double c = i % 2 == 0 ? std::floor(std::exp(std::log(6.0) + rng.next_double() *
                                                                       std::log(1e9 / 6.0)))
                                : 6 + static_cast<double>(rng.uniform_below(1'000'000'000 - 5));
    const auto w = qd_window_exists(c);
    ASSERT_TRUE(w) << c;
    ASSERT_GE(q_of(w->d, c), 0.4);
    ASSERT_LE(q_of(w->d, c), 0.65);
    const auto d = depth_window(c);
    ASSERT_TRUE(d) << c;
    ASSERT_LT(q_of(*d, c), 0.05);
    ASSERT_GT(q_of(*d + 7, c), 0.95);
  }
}

TEST(AccuracyParams, Validation) {
  EXPECT_NO_THROW((AccuracyParams{0.8, 0.2}.validate()));
  EXPECT_THROW((AccuracyParams{-1, 0.2}.validate()), std::invalid_argument);
  EXPECT_THROW((AccuracyParams{0.8, 0}.validate()), std::invalid_argument);
  EXPECT_EQ(parse_interval_method("normal"), IntervalMethod::kNormal);
  EXPECT_EQ(to_string(IntervalMethod::kWilson), "wilson");
  EXPECT_THROW(parse_interval_method("exact"), std::invalid_argument);
}

}  // namespace
}  // namespace stac
