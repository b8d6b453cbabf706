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
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "stac/formula.hpp"
#include "stac/oracle.hpp"
#include "stac/rng.hpp"

namespace stac {

using Rational = boost::multiprecision::cpp_rational;

struct ExactProbability {
  Rational exact;
  double value = 0.0;
};

/// Probability that a uniformly drawn 2^(n-d)-subset of the 2^n assignments
/// misses all `count` models:
///   C(2^n - count, 2^(n-d)) / C(2^n, 2^(n-d)),
/// evaluated as a telescoped product over min(count, 2^(n-d)) factors in exact
/// rational arithmetic. Requires n <= 30, 1 <= d <= n, count <= 2^n.
ExactProbability hypergeometric_unsat_prob(unsigned n, const ModelCount& count, unsigned d);

/// Membership vector (index = assignment bits) of a uniformly drawn
/// 2^(n-1)-subset of the 2^n assignments, i.e. the solution set of one
/// function from the subset-sampling family. Requires n <= 20.
std::vector<bool> draw_g_solution_set(unsigned n, RngStream& stream);

/// Fraction of `trials` in which d independent subset-family functions have
/// solution sets whose intersection misses all `count` models. Each function
/// only needs its membership on the models; since a simple random sample is
/// exchangeable, the models are visited first and sampled sequentially
/// without replacement, which is exactly the restriction of a full draw.
double sample_g_family_unsat(unsigned n, std::uint64_t count, unsigned d, std::uint64_t trials,
                             std::uint64_t seed);

/// Same, with the model count taken from `formula` (n <= 14).
double sample_g_family_unsat(const CnfFormula& formula, unsigned d, std::uint64_t trials,
                             std::uint64_t seed);

struct LimitRow {
  unsigned n = 0;
  double exact = 0.0;
  double limit = 0.0;
  double gap = 0.0;
};

/// For each n: the exact subset-model value, the large-n limit
/// (1 - 2^-d)^count, and their absolute gap.
std::vector<LimitRow> compare_limit(std::span<const unsigned> n_grid, std::uint64_t count,
                                    unsigned d);

}  // namespace stac
