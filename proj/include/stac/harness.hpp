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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "stac/formula.hpp"
#include "stac/solver.hpp"
#include "stac/stats.hpp"

namespace stac {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kReportSchema = 1;

enum class Algorithm { kStac, kStacDsc, kApproxMc, kExact };

std::string_view to_string(Algorithm algorithm);
Algorithm parse_algorithm(std::string_view name);

/// Either a DIMACS path or a random 3-CNF generator spec.
struct InstanceSpec {
  std::string name;
  std::string path;  // empty when generated
  Var gen_n = 0;
  std::uint32_t gen_m = 0;
  std::uint64_t gen_seed = 0;

  static InstanceSpec from_file(std::string path);
  static InstanceSpec generated(Var n, std::uint32_t m, std::uint64_t seed);
  /// Parses "n:m:seed".
  static InstanceSpec parse_generator(std::string_view spec);

  CnfFormula load() const;
};

struct ExperimentConfig {
  std::vector<InstanceSpec> instances;
  Algorithm algorithm = Algorithm::kStacDsc;
  double epsilon = 0.8;
  double delta = 0.2;
  std::uint64_t repetitions = 100;
  std::uint64_t master_seed = 1;
  IntervalMethod interval = IntervalMethod::kWilson;
  bool leapfrog = true;
  unsigned offset = 5;
  unsigned workers = 1;
  SolveBudget budget;
  std::optional<std::uint64_t> T;      // default: compute_T(epsilon, delta)
  std::optional<std::uint64_t> pivot;  // default: default_pivot(epsilon)
  /// Variables above this are not counted exactly; such rows report no frequency.
  Var exact_cap = 26;

  void validate() const;
  AccuracyParams params() const { return {epsilon, delta}; }
  std::uint64_t runs_limit() const;
  std::uint64_t pivot_value() const;
};

struct RepetitionResult {
  std::uint64_t seed = 0;
  double estimate = 0.0;
  std::string estimate_exact;  // decimal, for exact/approxmc big counts
  unsigned chosen_d = 0;
  std::uint64_t runs = 0;
  std::uint64_t queries = 0;
  bool stopped_early = false;
  double seconds = 0.0;
};

struct InstanceRow {
  std::string name;
  Var n = 0;
  std::optional<std::string> exact_count;
  std::optional<std::uint64_t> frequency;
  std::optional<double> interval_lower;  // (1 + eps)^-1 #F
  std::optional<double> interval_upper;  // (1 + eps) #F
  double mean_estimate = 0.0;
  double mean_runs = 0.0;     // T-bar
  double mean_queries = 0.0;  // Q-bar
  double mean_seconds = 0.0;  // t-bar
  std::uint64_t master_seed = 0;
  std::vector<RepetitionResult> repetitions;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::string started_at;
  std::vector<InstanceRow> rows;
};

/// Seed for repetition `repetition` of instance `instance`.
std::uint64_t repetition_seed(std::uint64_t master, std::uint32_t instance,
                              std::uint32_t repetition);

/// Worker count after applying the STAC_MAX_WORKERS cap.
unsigned effective_workers(unsigned requested);

/// True iff lower <= estimate <= upper for the (1 + eps) window around exact.
bool within_factor(double estimate, double exact, double epsilon);

/// Runs one repetition of the configured counter.
RepetitionResult run_once(const CnfFormula& formula, const ExperimentConfig& config,
                          std::uint64_t seed);

ExperimentReport run_experiment(const ExperimentConfig& config);

/// JSON report: {config, rows[], versions, started_at}. With
/// include_timing = false every wall-clock field is dropped, which makes two
/// runs of the same config byte-identical.
nlohmann::json to_json(const ExperimentReport& report, bool include_timing = true);
nlohmann::json to_json(const ExperimentConfig& config);

/// One line per instance; fixed column order, see kCsvHeader.
std::string to_csv(const ExperimentReport& report);
inline constexpr const char* kCsvHeader =
    "instance,n,exact_count,frequency,repetitions,mean_estimate,mean_runs,mean_queries,"
    "mean_seconds,master_seed";

/// Entry point for the `stac` executable. Exit codes: 0 success, 1 usage
/// error, 2 runtime failure.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stac
