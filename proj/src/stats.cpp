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

#include "stac/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace stac {

void AccuracyParams::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
}

std::string_view to_string(IntervalMethod method) {
  return method == IntervalMethod::kNormal ? "normal" : "wilson";
}

IntervalMethod parse_interval_method(std::string_view name) {
  if (name == "normal") return IntervalMethod::kNormal;
  if (name == "wilson") return IntervalMethod::kWilson;
  throw std::invalid_argument("unknown interval method '" + std::string(name) + "'");
}

double q_of(unsigned d, double count) {
  if (count < 0) throw std::domain_error("q_of: negative count");
  if (count == 0) return 1.0;
  if (d == 0) return 0.0;
  return std::exp(count * std::log1p(-std::ldexp(1.0, -static_cast<int>(d))));
}

std::optional<double> estimate_count(unsigned d, double proportion) {
  if (d == 0) throw std::domain_error("estimate_count: depth must be positive");
  if (!(proportion > 0.0 && proportion < 1.0)) return std::nullopt;
  return std::log(proportion) / std::log1p(-std::ldexp(1.0, -static_cast<int>(d)));
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_quantile: p must lie in (0, 1)");

  // Acklam's rational approximation, relative error about 1.15e-9.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  } else if (p <= 1 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
  } else {
    const double q = std::sqrt(-2 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }

  // Newton step on Phi(x) - p. Above the median the residual is formed from
  // the upper tail, (1 - p) - Q(x), which keeps its relative precision.
  const double density = std::exp(-0.5 * x * x) / std::sqrt(2 * M_PI);
  if (density > 0) {
    const double residual =
        p > 0.5 ? (1.0 - p) - 0.5 * std::erfc(x / std::sqrt(2.0)) : normal_cdf(x) - p;
    x -= residual / density;
  }
  return x;
}

double z_for_delta(double delta) { return normal_quantile(1.0 - delta / 2.0); }

ConfidenceInterval interval_normal(double q, std::uint64_t t, double z) {
  if (t == 0) throw std::invalid_argument("interval_normal: t must be positive");
  const double half = z * std::sqrt(q * (1 - q) / static_cast<double>(t));
  return {std::clamp(q - half, 0.0, 1.0), std::clamp(q + half, 0.0, 1.0),
          IntervalMethod::kNormal};
}

ConfidenceInterval interval_wilson(double q, std::uint64_t t, double z) {
  if (t == 0) throw std::invalid_argument("interval_wilson: t must be positive");
  const double tt = static_cast<double>(t);
  const double z2 = z * z;
  const double scale = 1.0 / (1.0 + z2 / tt);
  const double center = q + z2 / (2 * tt);
  const double half = z * std::sqrt(q * (1 - q) / tt + z2 / (4 * tt * tt));
  return {std::clamp(scale * (center - half), 0.0, 1.0),
          std::clamp(scale * (center + half), 0.0, 1.0), IntervalMethod::kWilson};
}

ConfidenceInterval proportion_interval(IntervalMethod method, double q, std::uint64_t t,
                                       double z) {
  return method == IntervalMethod::kNormal ? interval_normal(q, t, z)
                                           : interval_wilson(q, t, z);
}

double t_bound_first(double q, double epsilon, double z) {
  return z / (2 * q * (1 - std::pow(q, epsilon)));
}

double t_bound_second(double q, double epsilon, double z) {
  return z / (2 * (std::pow(q, 1 / (1 + epsilon)) - q));
}

std::uint64_t compute_T(const AccuracyParams& params) {
  params.validate();
  const double z = z_for_delta(params.delta);
  double worst = 0;
  for (double q : {0.4, 0.65}) {
    const double first = t_bound_first(q, params.epsilon, z);
    const double second = t_bound_second(q, params.epsilon, z);
    worst = std::max({worst, std::ceil(first * first), std::ceil(second * second)});
  }
  return static_cast<std::uint64_t>(worst);
}

std::optional<QdWindow> qd_window_exists(double count) {
  for (unsigned d = 1; d <= 128; ++d) {
    const double q = q_of(d, count);
    if (q >= 0.4 && q <= 0.65) return QdWindow{d, q};
    if (q > 0.65) break;
  }
  return std::nullopt;
}

std::optional<unsigned> depth_window(double count) {
  for (unsigned d = 0; d <= 128; ++d) {
    if (q_of(d, count) < 0.05 && q_of(d + 7, count) > 0.95) return d;
  }
  return std::nullopt;
}

}  // namespace stac
