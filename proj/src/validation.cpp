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

#include "stac/validation.hpp"

#include <algorithm>
#include <stdexcept>

#include "stac/stats.hpp"

namespace stac {

ExactProbability hypergeometric_unsat_prob(unsigned n, const ModelCount& count, unsigned d) {
  if (n > 30) throw std::invalid_argument("hypergeometric_unsat_prob: n must be at most 30");
  if (d == 0 || d > n) throw std::invalid_argument("hypergeometric_unsat_prob: need 1 <= d <= n");
  const ModelCount space = ModelCount(1) << n;
  if (count < 0 || count > space) {
    throw std::invalid_argument("hypergeometric_unsat_prob: count exceeds 2^n");
  }
  const ModelCount sample = ModelCount(1) << (n - d);

  ExactProbability out;
  if (sample > space - count) {
    out.exact = 0;
    return out;
  }
  // C(N - c, m) / C(N, m) == C(N - m, c) / C(N, c); loop over the smaller of c, m.
  const ModelCount& other = count < sample ? sample : count;
  const ModelCount steps = count < sample ? count : sample;
  ModelCount num = 1;
  ModelCount den = 1;
  for (ModelCount k = 0; k < steps; ++k) {
    num *= space - other - k;
    den *= space - k;
  }
  out.exact = Rational(num, den);
  out.value = out.exact.convert_to<double>();
  return out;
}

std::vector<bool> draw_g_solution_set(unsigned n, RngStream& stream) {
  if (n == 0 || n > 20) throw std::invalid_argument("draw_g_solution_set: need 1 <= n <= 20");
  const std::uint64_t total = std::uint64_t{1} << n;
  std::uint64_t needed = total / 2;
  std::vector<bool> members(total, false);
  // Selection sampling: point k is taken with probability needed / remaining.
  for (std::uint64_t k = 0; k < total && needed > 0; ++k) {
    if (stream.uniform_below(total - k) < needed) {
      members[k] = true;
      --needed;
    }
  }
  return members;
}

double sample_g_family_unsat(unsigned n, std::uint64_t count, unsigned d, std::uint64_t trials,
                             std::uint64_t seed) {
  if (n == 0 || n > 62) throw std::invalid_argument("sample_g_family_unsat: bad n");
  if (d == 0 || trials == 0) throw std::invalid_argument("sample_g_family_unsat: need d, trials > 0");
  const std::uint64_t total = std::uint64_t{1} << n;
  if (count > total) throw std::invalid_argument("sample_g_family_unsat: count exceeds 2^n");
  if (count == 0) return 1.0;

  RngStream stream(seed, StreamDomain::kGFamily, n, d);
  std::vector<bool> alive(count);
  std::uint64_t unsat = 0;
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    std::fill(alive.begin(), alive.end(), true);
    std::uint64_t survivors = count;
    for (unsigned i = 0; i < d && survivors > 0; ++i) {
      std::uint64_t needed = total / 2;
      for (std::uint64_t k = 0; k < count; ++k) {
        const bool member = stream.uniform_below(total - k) < needed;
        if (member) --needed;
        if (!member && alive[k]) {
          alive[k] = false;
          --survivors;
        }
      }
    }
    if (survivors == 0) ++unsat;
  }
  return static_cast<double>(unsat) / static_cast<double>(trials);
}

double sample_g_family_unsat(const CnfFormula& formula, unsigned d, std::uint64_t trials,
                             std::uint64_t seed) {
  if (formula.num_vars() > 14) {
    throw std::invalid_argument("sample_g_family_unsat: formula must have at most 14 variables");
  }
  return sample_g_family_unsat(formula.num_vars(), count_exhaustive(formula), d, trials, seed);
}

std::vector<LimitRow> compare_limit(std::span<const unsigned> n_grid, std::uint64_t count,
                                    unsigned d) {
  std::vector<LimitRow> rows;
  const double limit = q_of(d, static_cast<double>(count));
  for (unsigned n : n_grid) {
    LimitRow row;
    row.n = n;
    row.exact = hypergeometric_unsat_prob(n, ModelCount(count), d).value;
    row.limit = limit;
    row.gap = std::abs(row.exact - row.limit);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace stac
