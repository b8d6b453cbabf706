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
#include <string_view>

namespace stac {

/// The (epsilon, delta) target: estimate within a (1 + epsilon) factor of the
/// true count with probability at least 1 - delta.
struct AccuracyParams {
  double epsilon = 0.8;
  double delta = 0.2;

  void validate() const;
};

enum class IntervalMethod { kNormal, kWilson };

std::string_view to_string(IntervalMethod method);
IntervalMethod parse_interval_method(std::string_view name);

/// Confidence interval for a binomial proportion, clamped to [0, 1].
struct ConfidenceInterval {
  double lower = 0.0;
  double upper = 0.0;
  IntervalMethod method = IntervalMethod::kWilson;
};

/// q_d = (1 - 2^-d)^count, evaluated as exp(count * log1p(-2^-d)).
double q_of(unsigned d, double count);

/// log base (1 - 2^-d) of `proportion`. Empty when the proportion is 0 or 1,
/// where the depth cannot be used. Throws std::domain_error for d = 0.
std::optional<double> estimate_count(unsigned d, double proportion);

/// Inverse standard normal CDF. Rational approximation followed by one Newton
/// step on the CDF; absolute error well below 1e-9 over (0, 1).
double normal_quantile(double p);

/// Standard normal CDF.
double normal_cdf(double x);

/// The two-sided quantile z_{1 - delta/2} used for every interval and for T.
double z_for_delta(double delta);

/// q +- z sqrt(q(1-q)/t), clamped.
ConfidenceInterval interval_normal(double q, std::uint64_t t, double z);

/// Wilson score interval:
///   1/(1 + z^2/t) * [q + z^2/(2t) +- z sqrt(q(1-q)/t + z^2/(4t^2))], clamped.
ConfidenceInterval interval_wilson(double q, std::uint64_t t, double z);

ConfidenceInterval proportion_interval(IntervalMethod method, double q, std::uint64_t t,
                                       double z);

/// First term of the sample-size bound as a function of q: z / (2 q (1 - q^eps)).
double t_bound_first(double q, double epsilon, double z);
/// Second term: z / (2 (q^(1/(1+eps)) - q)).
double t_bound_second(double q, double epsilon, double z);

/// Number of GetDepth runs needed for an (epsilon, delta) guarantee: the
/// larger of the two squared-and-ceiled bounds, evaluated at q = 0.4 and
/// q = 0.65 with z = z_{1 - delta/2}.
std::uint64_t compute_T(const AccuracyParams& params);

struct QdWindow {
  unsigned d = 0;
  double q = 0.0;
};

/// Some d in 1..128 with q_d in [0.4, 0.65]; guaranteed to exist for count > 5.
std::optional<QdWindow> qd_window_exists(double count);

/// Some d with q_d < 0.05 and q_{d+7} > 0.95; the depth of a run lands in
/// [d, d + 7] with probability above 0.9.
std::optional<unsigned> depth_window(double count);

}  // namespace stac
