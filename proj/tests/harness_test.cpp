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

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "stac/harness.hpp"
#include "stac/oracle.hpp"
#include "test_util.hpp"

namespace stac {
namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (::testing::TempDir().empty() ? std::string("/tmp/") : ::testing::TempDir()) + name;
}

ExperimentConfig small_config(Algorithm algorithm) {
  ExperimentConfig cfg;
  cfg.instances = {InstanceSpec::generated(12, 30, 1), InstanceSpec::generated(10, 20, 2)};
  cfg.algorithm = algorithm;
  cfg.repetitions = 6;
  cfg.master_seed = 99;
  return cfg;
}

TEST(Algorithm, Names) {
  for (Algorithm a : {Algorithm::kStac, Algorithm::kStacDsc, Algorithm::kApproxMc,
                      Algorithm::kExact}) {
    EXPECT_EQ(parse_algorithm(to_string(a)), a);
  }
  EXPECT_THROW(parse_algorithm("mbound"), std::invalid_argument);
}

TEST(InstanceSpec, GeneratorSpec) {
  const InstanceSpec s = InstanceSpec::parse_generator("12:40:3");
  EXPECT_EQ(s.gen_n, 12u);
  EXPECT_EQ(s.gen_m, 40u);
  EXPECT_EQ(s.gen_seed, 3u);
  EXPECT_EQ(s.load(), generate_random_3cnf(12, 40, 3));
  EXPECT_THROW(InstanceSpec::parse_generator("12:40"), std::invalid_argument);
  EXPECT_THROW(InstanceSpec::parse_generator("12:40:3:1"), std::invalid_argument);
}

TEST(ExperimentConfig, Validation) {
  ExperimentConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(cfg.runs_limit(), 22u);
  EXPECT_EQ(cfg.pivot_value(), 50u);
  cfg.repetitions = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.repetitions = 1;
  cfg.delta = 1.5;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(RepetitionSeed, NoCollisionsOverGrid) {
  std::set<std::uint64_t> seen;
  for (std::uint32_t j = 0; j < 50; ++j) {
    for (std::uint32_t i = 0; i < 1000; ++i) seen.insert(repetition_seed(7, j, i));
  }
  EXPECT_EQ(seen.size(), 50u * 1000u);
}

TEST(WithinFactor, Bounds) {
  EXPECT_TRUE(within_factor(100, 100, 0.8));
  EXPECT_TRUE(within_factor(180, 100, 0.8));
  EXPECT_FALSE(within_factor(181, 100, 0.8));
  EXPECT_TRUE(within_factor(100 / 1.8, 100, 0.8));
  EXPECT_FALSE(within_factor(55, 100, 0.8));
}

TEST(EffectiveWorkers, EnvironmentCap) {
  ::setenv("STAC_MAX_WORKERS", "2", 1);
  EXPECT_EQ(effective_workers(8), 2u);
  EXPECT_EQ(effective_workers(1), 1u);
  ::unsetenv("STAC_MAX_WORKERS");
  EXPECT_EQ(effective_workers(3), 3u);
}

TEST(RunExperiment, ExactAlgorithmHitsEveryTime) {
  const ExperimentReport report = run_experiment(small_config(Algorithm::kExact));
  for (const InstanceRow& row : report.rows) {
    ASSERT_TRUE(row.exact_count);
    ASSERT_TRUE(row.frequency);
    EXPECT_EQ(*row.frequency, 6u);
    for (const RepetitionResult& r : row.repetitions) {
      EXPECT_EQ(r.estimate_exact, *row.exact_count);
    }
  }
}

TEST(RunExperiment, ReplayIsByteIdenticalWithoutTiming) {
  for (Algorithm a : {Algorithm::kStac, Algorithm::kStacDsc, Algorithm::kApproxMc}) {
    ExperimentConfig cfg = small_config(a);
    const std::string first = to_json(run_experiment(cfg), false).dump();
    EXPECT_EQ(first, to_json(run_experiment(cfg), false).dump()) << to_string(a);
    const nlohmann::json serial = to_json(run_experiment(cfg), false)["rows"];
    cfg.workers = 3;
    EXPECT_EQ(serial.dump(), to_json(run_experiment(cfg), false)["rows"].dump()) << to_string(a);
  }
}

TEST(RunExperiment, ReportFields) {
  const ExperimentReport report = run_experiment(small_config(Algorithm::kStacDsc));
  ASSERT_EQ(report.rows.size(), 2u);
  for (const InstanceRow& row : report.rows) {
    EXPECT_EQ(row.master_seed, 99u);
    EXPECT_EQ(row.repetitions.size(), 6u);
    ASSERT_TRUE(row.frequency);
    EXPECT_LE(*row.frequency, 6u);
    EXPECT_GE(row.mean_queries, row.mean_runs);
  }
  const nlohmann::json j = to_json(report);
  for (const char* key : {"config", "rows", "versions", "started_at"}) EXPECT_TRUE(j.contains(key));
  EXPECT_EQ(j["versions"]["report_schema"], kReportSchema);
  EXPECT_EQ(j["rows"][0]["repetitions"].size(), 6u);
  EXPECT_FALSE(to_json(report, false).contains("started_at"));
  EXPECT_FALSE(to_json(report, false)["rows"][0].contains("mean_seconds"));

  const std::string csv = to_csv(report);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kCsvHeader);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}

TEST(RunExperiment, LargeInstanceHasNoFrequency) {
  ExperimentConfig cfg = small_config(Algorithm::kStac);
  cfg.exact_cap = 11;
  cfg.repetitions = 1;
  const ExperimentReport report = run_experiment(cfg);
  EXPECT_FALSE(report.rows[0].frequency);
  EXPECT_TRUE(report.rows[1].frequency);
}

TEST(Cli, TableGridContainsKnownCell) {
  const CliRun r = run_cli({"table-t", "--grid"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("0.8,0.2,"), std::string::npos);
  EXPECT_NE(r.out.find(",22\n"), std::string::npos);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 13);
}

TEST(Cli, GenWritesParseableFile) {
  const std::string path = temp_path("stac_cli_gen.cnf");
  const CliRun r = run_cli({"gen", "--n", "12", "--m", "40", "--seed", "3", "-o", path});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  EXPECT_EQ(parse_dimacs(text.str()), generate_random_3cnf(12, 40, 3));
  std::remove(path.c_str());
}

TEST(Cli, CountPrintsSingleJsonObject) {
  const std::string path = temp_path("stac_cli_count.cnf");
  ASSERT_EQ(run_cli({"gen", "--n", "10", "--m", "20", "--seed", "1", "-o", path}).code, 0);
  const CliRun r = run_cli({"count", "--algorithm", "stac-dsc", "--epsilon", "0.8", "--delta",
                            "0.2", "--seed", "7", path});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 1);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j.is_object());
  EXPECT_GT(j["estimate"].get<double>(), 0.0);
  EXPECT_EQ(j["algorithm"], "stac-dsc");
  const CliRun exact = run_cli({"count", "--algorithm", "exact", path});
  EXPECT_EQ(nlohmann::json::parse(exact.out)["estimate_exact"],
            count_exact(generate_random_3cnf(10, 20, 1)).str());
  std::remove(path.c_str());
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli({"--help"}).code, 0);
  const CliRun unknown = run_cli({"count", "--bogus", "x.cnf"});
  EXPECT_EQ(unknown.code, 1);
  EXPECT_FALSE(unknown.err.empty());
  EXPECT_EQ(run_cli({}).code, 1);
  EXPECT_EQ(run_cli({"count", "/nonexistent/file.cnf"}).code, 2);
  EXPECT_EQ(run_cli({"bench"}).code, 1);
}

TEST(Cli, ValidateCsv) {
  const CliRun r = run_cli({"validate", "--count", "2", "--d", "1", "--n-grid", "2,4,8"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "n,count,d,exact,limit,gap");
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 4);
}

TEST(Cli, BenchCsvAndJson) {
  const CliRun csv = run_cli({"bench", "--gen", "10:20:1", "--repetitions", "3", "--format", "csv"});
  ASSERT_EQ(csv.code, 0) << csv.err;
  EXPECT_EQ(csv.out.substr(0, csv.out.find('\n')), kCsvHeader);
  const CliRun json = run_cli({"bench", "--gen", "10:20:1", "--repetitions", "3", "--no-timing"});
  ASSERT_EQ(json.code, 0) << json.err;
  EXPECT_EQ(nlohmann::json::parse(json.out)["rows"][0]["repetitions"].size(), 3u);
}

}  // namespace
}  // namespace stac
