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

#include "stac/harness.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "stac/approxmc.hpp"
#include "stac/oracle.hpp"
#include "stac/stac.hpp"
#include "stac/validation.hpp"

namespace stac {

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kStac: return "stac";
    case Algorithm::kStacDsc: return "stac-dsc";
    case Algorithm::kApproxMc: return "approxmc";
    case Algorithm::kExact: return "exact";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "stac") return Algorithm::kStac;
  if (name == "stac-dsc") return Algorithm::kStacDsc;
  if (name == "approxmc") return Algorithm::kApproxMc;
  if (name == "exact") return Algorithm::kExact;
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string now_utc() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string to_decimal(const ModelCount& c) { return c.str(); }

}  // namespace

InstanceSpec InstanceSpec::from_file(std::string path) {
  InstanceSpec spec;
  const auto slash = path.find_last_of('/');
  spec.name = slash == std::string::npos ? path : path.substr(slash + 1);
  spec.path = std::move(path);
  return spec;
}

InstanceSpec InstanceSpec::generated(Var n, std::uint32_t m, std::uint64_t seed) {
  InstanceSpec spec;
  spec.name = "rand3-" + std::to_string(n) + "-" + std::to_string(m) + "-" + std::to_string(seed);
  spec.gen_n = n;
  spec.gen_m = m;
  spec.gen_seed = seed;
  return spec;
}

InstanceSpec InstanceSpec::parse_generator(std::string_view text) {
  unsigned long long n = 0, m = 0, seed = 0;
  char c1 = 0, c2 = 0;
  std::istringstream in{std::string(text)};
  if (!(in >> n >> c1 >> m >> c2 >> seed) || c1 != ':' || c2 != ':' || !in.eof()) {
    throw std::invalid_argument("generator must be n:m:seed, got '" + std::string(text) + "'");
  }
  return generated(static_cast<Var>(n), static_cast<std::uint32_t>(m), seed);
}

CnfFormula InstanceSpec::load() const {
  if (!path.empty()) return parse_dimacs(read_file(path));
  return generate_random_3cnf(gen_n, gen_m, gen_seed);
}

void ExperimentConfig::validate() const {
  if (repetitions == 0) throw std::invalid_argument("repetitions must be at least 1");
  params().validate();
  if (offset == 0) throw std::invalid_argument("offset must be positive");
  if (T && *T == 0) throw std::invalid_argument("T must be positive");
  if (pivot && *pivot == 0) throw std::invalid_argument("pivot must be positive");
}

std::uint64_t ExperimentConfig::runs_limit() const { return T ? *T : compute_T(params()); }

std::uint64_t ExperimentConfig::pivot_value() const {
  return pivot ? *pivot : default_pivot(epsilon);
}

std::uint64_t repetition_seed(std::uint64_t master, std::uint32_t instance,
                              std::uint32_t repetition) {
  return derive_seed(master, instance, repetition);
}

unsigned effective_workers(unsigned requested) {
  unsigned workers = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  if (const char* cap = std::getenv("STAC_MAX_WORKERS")) {
    const long value = std::strtol(cap, nullptr, 10);
    if (value > 0) workers = std::min(workers, static_cast<unsigned>(value));
  }
  return workers;
}

bool within_factor(double estimate, double exact, double epsilon) {
  return estimate >= exact / (1 + epsilon) && estimate <= exact * (1 + epsilon);
}

RepetitionResult run_once(const CnfFormula& formula, const ExperimentConfig& config,
                          std::uint64_t seed) {
  RepetitionResult r;
  r.seed = seed;
  const auto start = std::chrono::steady_clock::now();
  const StacOptions stac_options{seed, config.leapfrog, config.offset, config.budget};
  switch (config.algorithm) {
    case Algorithm::kStac: {
      const CountEstimate e = stac(formula, config.runs_limit(), stac_options);
      r.estimate = e.estimate;
      r.chosen_d = e.chosen_d;
      r.runs = e.runs_used;
      r.queries = e.sat_queries;
      break;
    }
    case Algorithm::kStacDsc: {
      DscOptions options{stac_options, config.params(), config.interval, 1};
      const CountEstimate e = stac_dsc(formula, config.runs_limit(), options);
      r.estimate = e.estimate;
      r.chosen_d = e.chosen_d;
      r.runs = e.runs_used;
      r.queries = e.sat_queries;
      r.stopped_early = e.stopped_early;
      break;
    }
    case Algorithm::kApproxMc: {
      const ApproxMcResult e = approxmc(
          formula, {config.runs_limit(), config.pivot_value(), seed, config.budget});
      r.estimate = e.estimate.convert_to<double>();
      r.estimate_exact = to_decimal(e.estimate);
      r.runs = e.runs;
      r.queries = e.solve_calls;
      break;
    }
    case Algorithm::kExact: {
      ExactCountOptions options;
      options.exhaustive_cap = config.exact_cap;
      const ModelCount c = count_exact(formula, options);
      r.estimate = c.convert_to<double>();
      r.estimate_exact = to_decimal(c);
      break;
    }
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  ExperimentReport report;
  report.config = config;
  report.started_at = now_utc();

  std::vector<CnfFormula> formulas;
  formulas.reserve(config.instances.size());
  for (const InstanceSpec& spec : config.instances) formulas.push_back(spec.load());

  report.rows.resize(formulas.size());
  std::vector<std::optional<double>> exact(formulas.size());
  for (std::size_t j = 0; j < formulas.size(); ++j) {
    InstanceRow& row = report.rows[j];
    row.name = config.instances[j].name;
    row.n = formulas[j].num_vars();
    row.master_seed = config.master_seed;
    row.repetitions.resize(config.repetitions);
    if (formulas[j].num_vars() <= config.exact_cap) {
      const ModelCount c = count_exact(formulas[j], {.exhaustive_cap = config.exact_cap});
      row.exact_count = to_decimal(c);
      exact[j] = c.convert_to<double>();
      row.interval_lower = *exact[j] / (1 + config.epsilon);
      row.interval_upper = *exact[j] * (1 + config.epsilon);
    }
  }

  // Work items are (instance, repetition); results land at fixed indices so
  // the merge does not depend on scheduling.
  const std::size_t total = formulas.size() * config.repetitions;
  std::size_t next = 0;
  std::mutex mutex;
  std::exception_ptr failure;
  auto worker = [&] {
    for (;;) {
      std::size_t item;
      {
        std::lock_guard lock(mutex);
        if (next >= total || failure) return;
        item = next++;
      }
      const std::size_t j = item / config.repetitions;
      const auto i = static_cast<std::uint32_t>(item % config.repetitions);
      try {
        const std::uint64_t seed =
            repetition_seed(config.master_seed, static_cast<std::uint32_t>(j), i);
        report.rows[j].repetitions[i] = run_once(formulas[j], config, seed);
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned workers = effective_workers(config.workers);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t j = 0; j < formulas.size(); ++j) {
    InstanceRow& row = report.rows[j];
    const double reps = static_cast<double>(config.repetitions);
    std::uint64_t hits = 0;
    for (const RepetitionResult& r : row.repetitions) {
      row.mean_estimate += r.estimate / reps;
      row.mean_runs += static_cast<double>(r.runs) / reps;
      row.mean_queries += static_cast<double>(r.queries) / reps;
      row.mean_seconds += r.seconds / reps;
      if (exact[j] && within_factor(r.estimate, *exact[j], config.epsilon)) ++hits;
    }
    if (exact[j]) row.frequency = hits;
  }
  return report;
}

nlohmann::json to_json(const ExperimentConfig& config) {
  nlohmann::json instances = nlohmann::json::array();
  for (const InstanceSpec& spec : config.instances) {
    nlohmann::json item{{"name", spec.name}};
    if (!spec.path.empty()) {
      item["path"] = spec.path;
    } else {
      item["generator"] = {{"n", spec.gen_n}, {"m", spec.gen_m}, {"seed", spec.gen_seed}};
    }
    instances.push_back(std::move(item));
  }
  return {
      {"instances", std::move(instances)},
      {"algorithm", to_string(config.algorithm)},
      {"epsilon", config.epsilon},
      {"delta", config.delta},
      {"repetitions", config.repetitions},
      {"master_seed", config.master_seed},
      {"interval", to_string(config.interval)},
      {"leapfrog", config.leapfrog},
      {"offset", config.offset},
      {"workers", config.workers},
      {"budget", config.budget ? nlohmann::json(*config.budget) : nlohmann::json(nullptr)},
      {"T", config.runs_limit()},
      {"pivot", config.pivot_value()},
      {"exact_cap", config.exact_cap},
  };
}

nlohmann::json to_json(const ExperimentReport& report, bool include_timing) {
  nlohmann::json rows = nlohmann::json::array();
  for (const InstanceRow& row : report.rows) {
    nlohmann::json reps = nlohmann::json::array();
    for (const RepetitionResult& r : row.repetitions) {
      nlohmann::json item{
          {"seed", r.seed},         {"estimate", r.estimate},     {"chosen_d", r.chosen_d},
          {"runs", r.runs},         {"queries", r.queries},       {"stopped_early", r.stopped_early},
      };
      if (!r.estimate_exact.empty()) item["estimate_exact"] = r.estimate_exact;
      if (include_timing) item["seconds"] = r.seconds;
      reps.push_back(std::move(item));
    }
    nlohmann::json j{
        {"instance", row.name},
        {"n", row.n},
        {"exact_count", row.exact_count ? nlohmann::json(*row.exact_count) : nlohmann::json(nullptr)},
        {"frequency", row.frequency ? nlohmann::json(*row.frequency) : nlohmann::json(nullptr)},
        {"window", row.interval_lower
                       ? nlohmann::json::array({*row.interval_lower, *row.interval_upper})
                       : nlohmann::json(nullptr)},
        {"mean_estimate", row.mean_estimate},
        {"mean_runs", row.mean_runs},
        {"mean_queries", row.mean_queries},
        {"master_seed", row.master_seed},
        {"repetitions", std::move(reps)},
    };
    if (include_timing) j["mean_seconds"] = row.mean_seconds;
    rows.push_back(std::move(j));
  }
  nlohmann::json out{
      {"config", to_json(report.config)},
      {"rows", std::move(rows)},
      {"versions", {{"stac", kVersion}, {"report_schema", kReportSchema}}},
  };
  if (include_timing) out["started_at"] = report.started_at;
  return out;
}

std::string to_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << kCsvHeader << '\n' << std::setprecision(10);
  for (const InstanceRow& row : report.rows) {
    out << row.name << ',' << row.n << ',' << row.exact_count.value_or("") << ',';
    if (row.frequency) out << *row.frequency;
    out << ',' << row.repetitions.size() << ',' << row.mean_estimate << ',' << row.mean_runs
        << ',' << row.mean_queries << ',' << row.mean_seconds << ',' << row.master_seed << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// CLI

namespace {

struct CounterFlags {
  std::string algorithm = "stac-dsc";
  double epsilon = 0.8;
  double delta = 0.2;
  std::uint64_t seed = 1;
  std::string interval = "wilson";
  bool no_leapfrog = false;
  unsigned offset = 5;
  std::uint64_t T = 0;
  std::uint64_t pivot = 0;
  std::uint64_t budget = 0;

  void add_to(CLI::App& app) {
    app.add_option("--algorithm", algorithm, "stac, stac-dsc, approxmc or exact")
        ->check(CLI::IsMember({"stac", "stac-dsc", "approxmc", "exact"}));
    app.add_option("--epsilon", epsilon, "Tolerance: estimate within a (1+eps) factor")
        ->check(CLI::PositiveNumber);
    app.add_option("--delta", delta, "Confidence: succeed with probability 1-delta")
        ->check(CLI::Range(0.0, 1.0));
    app.add_option("--seed", seed, "Master seed");
    app.add_option("--interval", interval, "Proportion interval for the stopping rule")
        ->check(CLI::IsMember({"wilson", "normal"}));
    app.add_flag("--no-leapfrog", no_leapfrog, "Probe every depth from 0");
    app.add_option("--offset", offset, "Leap-frog offset")->check(CLI::PositiveNumber);
    app.add_option("--T", T, "Override the number of runs (0 = derive from eps, delta)");
    app.add_option("--pivot", pivot, "ApproxMC pivot (0 = default)");
    app.add_option("--budget", budget, "Per-solve step limit (0 = unlimited)");
  }

  void apply(ExperimentConfig& cfg) const {
    cfg.algorithm = parse_algorithm(algorithm);
    cfg.epsilon = epsilon;
    cfg.delta = delta;
    cfg.master_seed = seed;
    cfg.interval = parse_interval_method(interval);
    cfg.leapfrog = !no_leapfrog;
    cfg.offset = offset;
    if (T > 0) cfg.T = T;
    if (pivot > 0) cfg.pivot = pivot;
    if (budget > 0) cfg.budget = budget;
  }
};

int run_count(const CounterFlags& flags, const std::string& file, std::ostream& out) {
  ExperimentConfig cfg;
  flags.apply(cfg);
  cfg.validate();
  const CnfFormula formula =
      file == "-" ? parse_dimacs(std::string(std::istreambuf_iterator<char>(std::cin), {}))
                  : parse_dimacs(read_file(file));
  const std::uint64_t seed = repetition_seed(cfg.master_seed, 0, 0);
  nlohmann::json j{{"file", file},        {"n", formula.num_vars()},
                   {"algorithm", to_string(cfg.algorithm)},
                   {"epsilon", cfg.epsilon}, {"delta", cfg.delta},
                   {"seed", cfg.master_seed}};

  switch (cfg.algorithm) {
    case Algorithm::kStac:
    case Algorithm::kStacDsc: {
      const StacOptions so{seed, cfg.leapfrog, cfg.offset, cfg.budget};
      const CountEstimate e =
          cfg.algorithm == Algorithm::kStac
              ? stac(formula, cfg.runs_limit(), so)
              : stac_dsc(formula, cfg.runs_limit(), {so, cfg.params(), cfg.interval, 1});
      j["estimate"] = e.estimate;
      j["chosen_d"] = e.chosen_d;
      j["runs_used"] = e.runs_used;
      j["sat_queries"] = e.sat_queries;
      j["stopped_early"] = e.stopped_early;
      j["T"] = cfg.runs_limit();
      j["interval"] = e.interval ? nlohmann::json::array({e.interval->lower, e.interval->upper})
                                 : nlohmann::json(nullptr);
      break;
    }
    case Algorithm::kApproxMc: {
      const ApproxMcResult e =
          approxmc(formula, {cfg.runs_limit(), cfg.pivot_value(), seed, cfg.budget});
      j["estimate"] = e.estimate.convert_to<double>();
      j["estimate_exact"] = e.estimate.str();
      j["runs_used"] = e.runs;
      j["sat_queries"] = e.solve_calls;
      j["pivot"] = cfg.pivot_value();
      j["T"] = cfg.runs_limit();
      break;
    }
    case Algorithm::kExact: {
      const ModelCount c = count_exact(formula, {.exhaustive_cap = cfg.exact_cap});
      j["estimate"] = c.convert_to<double>();
      j["estimate_exact"] = c.str();
      break;
    }
  }
  out << j.dump() << '\n';
  return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Approximate model counting with satisfiability queries", "stac"};
  app.require_subcommand(1);

  CounterFlags count_flags;
  std::string count_file;
  auto* count_cmd = app.add_subcommand("count", "Estimate the model count of a DIMACS file");
  count_flags.add_to(*count_cmd);
  count_cmd->add_option("file", count_file, "DIMACS CNF file ('-' for stdin)")->required();

  CounterFlags bench_flags;
  std::vector<std::string> bench_files;
  std::vector<std::string> bench_gens;
  std::uint64_t bench_reps = 100;
  unsigned bench_workers = 1;
  std::string bench_format = "json";
  std::string bench_output;
  bool bench_no_timing = false;
  auto* bench_cmd = app.add_subcommand("bench", "Repeat a counter over instances and report");
  bench_flags.add_to(*bench_cmd);
  bench_cmd->add_option("files", bench_files, "DIMACS instances");
  bench_cmd->add_option("--gen", bench_gens, "Generated random 3-CNF instance n:m:seed");
  bench_cmd->add_option("--repetitions", bench_reps, "Repetitions per instance")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--workers", bench_workers, "Worker threads (0 = all cores)");
  bench_cmd->add_option("--format", bench_format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  bench_cmd->add_option("-o,--output", bench_output, "Write the report here instead of stdout");
  bench_cmd->add_flag("--no-timing", bench_no_timing, "Omit wall-clock fields from JSON");

  unsigned gen_n = 0;
  std::uint32_t gen_m = 0;
  std::uint64_t gen_seed = 1;
  unsigned gen_free = 0;
  std::string gen_output;
  auto* gen_cmd = app.add_subcommand("gen", "Write a random 3-CNF instance");
  gen_cmd->add_option("--n", gen_n, "Variables")->required();
  gen_cmd->add_option("--m", gen_m, "Clauses");
  gen_cmd->add_option("--seed", gen_seed, "Generator seed");
  gen_cmd->add_option("--free", gen_free,
                      "Instead of random clauses, pin all but this many variables (2^free models)");
  gen_cmd->add_option("-o,--output", gen_output, "Output path (stdout if omitted)");

  std::uint64_t val_count = 2;
  unsigned val_d = 1;
  std::vector<unsigned> val_grid{2, 4, 8, 16};
  std::uint64_t val_trials = 0;
  std::uint64_t val_seed = 1;
  auto* val_cmd = app.add_subcommand("validate", "Subset-family probabilities versus the limit (CSV)");
  val_cmd->add_option("--count", val_count, "Model count");
  val_cmd->add_option("--d", val_d, "Number of hash functions")->check(CLI::PositiveNumber);
  val_cmd->add_option("--n-grid", val_grid, "Comma-separated n values")->delimiter(',');
  val_cmd->add_option("--trials", val_trials, "Monte-Carlo trials per row (0 = exact only)");
  val_cmd->add_option("--seed", val_seed, "Monte-Carlo seed");

  bool t_grid = false;
  double t_eps = 0.8;
  double t_delta = 0.2;
  auto* t_cmd = app.add_subcommand("table-t", "Runs needed per (epsilon, delta)");
  t_cmd->add_flag("--grid", t_grid, "Print the standard grid");
  t_cmd->add_option("--epsilon", t_eps)->check(CLI::PositiveNumber);
  t_cmd->add_option("--delta", t_delta)->check(CLI::Range(0.0, 1.0));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return 0;
    }
    app.exit(e, err, err);
    return 1;
  }

  try {
    if (*count_cmd) return run_count(count_flags, count_file, out);

    if (*bench_cmd) {
      ExperimentConfig cfg;
      bench_flags.apply(cfg);
      cfg.repetitions = bench_reps;
      cfg.workers = bench_workers;
      for (const auto& f : bench_files) cfg.instances.push_back(InstanceSpec::from_file(f));
      for (const auto& g : bench_gens) cfg.instances.push_back(InstanceSpec::parse_generator(g));
      if (cfg.instances.empty()) {
        err << "bench: no instances given (files or --gen)\n";
        return 1;
      }
      const ExperimentReport report = run_experiment(cfg);
      const std::string text = bench_format == "csv"
                                   ? to_csv(report)
                                   : to_json(report, !bench_no_timing).dump(2) + "\n";
      if (bench_output.empty()) {
        out << text;
      } else {
        std::ofstream file(bench_output);
        if (!(file << text)) throw std::runtime_error("cannot write '" + bench_output + "'");
      }
      return 0;
    }

    if (*gen_cmd) {
      const CnfFormula f = gen_free > 0 || gen_cmd->count("--free") > 0
                               ? generate_fixed_count(gen_n, gen_free)
                               : generate_random_3cnf(gen_n, gen_m, gen_seed);
      const std::string text = emit_dimacs(f);
      if (gen_output.empty()) {
        out << text;
      } else {
        std::ofstream file(gen_output);
        if (!(file << text)) throw std::runtime_error("cannot write '" + gen_output + "'");
      }
      return 0;
    }

    if (*val_cmd) {
      out << "n,count,d,exact,limit,gap" << (val_trials > 0 ? ",empirical,sigma" : "") << '\n';
      out << std::setprecision(12);
      for (const LimitRow& row : compare_limit(val_grid, val_count, val_d)) {
        out << row.n << ',' << val_count << ',' << val_d << ',' << row.exact << ','
            << row.limit << ',' << row.gap;
        if (val_trials > 0) {
          const double p = sample_g_family_unsat(row.n, val_count, val_d, val_trials, val_seed);
          const double sigma = std::sqrt(row.exact * (1 - row.exact) / static_cast<double>(val_trials));
          out << ',' << p << ',' << sigma;
        }
        out << '\n';
      }
      return 0;
    }

    if (*t_cmd) {
      out << "epsilon,delta,z,T\n";
      std::vector<std::pair<double, double>> cells;
      if (t_grid) {
        for (double e : {0.1, 0.2, 0.4, 0.8}) {
          for (double d : {0.1, 0.2, 0.3}) cells.emplace_back(e, d);
        }
      } else {
        cells.emplace_back(t_eps, t_delta);
      }
      out << std::setprecision(10);
      for (auto [e, d] : cells) {
        out << e << ',' << d << ',' << z_for_delta(d) << ',' << compute_T({e, d}) << '\n';
      }
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace stac
