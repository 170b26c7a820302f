/*
 * Copyright 2026 The GUF Authors. All rights reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// guf command-line front end. Talks to the library through the C API only.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "guf/guf.h"
#include "json.hpp"

namespace {

constexpr int kExitUsage = 2;

/// Raised for any failure that should end the process with kExitUsage.
struct CommandError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(guf_status status) {
  if (status != GUF_OK) {
    const std::string detail = guf_last_error();
    throw CommandError(std::string(guf_status_string(status)) + (detail.empty() ? "" : ": " + detail));
  }
}

template <typename T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};
using BeliefPtr = std::unique_ptr<guf_belief, Deleter<guf_belief, guf_belief_destroy>>;
using RulePtr = std::unique_ptr<guf_rule, Deleter<guf_rule, guf_rule_destroy>>;
using SigmaSetPtr = std::unique_ptr<guf_sigma_set, Deleter<guf_sigma_set, guf_sigma_set_destroy>>;
using ScenarioPtr = std::unique_ptr<guf_scenario, Deleter<guf_scenario, guf_scenario_destroy>>;
using BenchPtr = std::unique_ptr<guf_bench, Deleter<guf_bench, guf_bench_destroy>>;

struct ScenarioOptions {
  std::string scenario;
  int runs = 0;
  int steps = 0;
  long long seed = -1;
  bool q2_literal = false;
};

void add_scenario_options(CLI::App* cmd, ScenarioOptions& o, bool with_runs) {
  cmd->add_option("scenario", o.scenario, "scenario file or bundled name (scenario1..scenario4)")->required();
  if (with_runs) cmd->add_option("--runs", o.runs, "Monte Carlo runs (overrides the scenario)")->check(CLI::PositiveNumber);
  cmd->add_option("--steps", o.steps, "time steps (overrides the scenario)")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "master seed (overrides the scenario)")->check(CLI::NonNegativeNumber);
  cmd->add_flag("--q2-literal", o.q2_literal, "use bare q2 as the turn-rate noise block");
}

ScenarioPtr open_scenario(const ScenarioOptions& o) {
  guf_scenario* raw = nullptr;
  check(guf_scenario_load(o.scenario.c_str(), &raw));
  ScenarioPtr scenario(raw);
  if (o.runs > 0) check(guf_scenario_set_runs(scenario.get(), o.runs));
  if (o.steps > 0) check(guf_scenario_set_steps(scenario.get(), o.steps));
  if (o.seed >= 0) check(guf_scenario_set_seed(scenario.get(), static_cast<uint64_t>(o.seed)));
  if (o.q2_literal) check(guf_scenario_set_q2_literal(scenario.get(), 1));
  return scenario;
}

int cmd_quantile(int dim, const std::vector<double>& levels) {
  for (double d : levels) {
    if (!(d > 0.0 && d <= 1.0)) throw CommandError("--d values must lie in (0, 1], got " + std::to_string(d));
  }
  std::cout << "d,r\n" << std::setprecision(12);
  for (double d : levels) {
    double r = 0.0;
    check(guf_chi2_quantile(dim, d, &r));
    std::cout << d << ',' << r << '\n';
  }
  return 0;
}

int cmd_sample(const std::string& belief_path, const std::string& rule_spec, const std::string& out) {
  guf_belief* belief_raw = nullptr;
  check(guf_belief_load(belief_path.c_str(), &belief_raw));
  BeliefPtr belief(belief_raw);
  guf_rule* rule_raw = nullptr;
  check(guf_rule_parse(rule_spec.c_str(), guf_belief_dimension(belief.get()), &rule_raw));
  RulePtr rule(rule_raw);
  guf_sigma_set* set_raw = nullptr;
  check(guf_sigma_set_build(belief.get(), rule.get(), &set_raw));
  SigmaSetPtr set(set_raw);
  check(guf_sigma_set_write_csv(set.get(), out.c_str()));

  double weight_sum = 0.0, mean = 0.0, covariance = 0.0;
  check(guf_sigma_set_moment_residuals(set.get(), &weight_sum, &mean, &covariance));
  std::ostream& info = out == "-" ? std::cerr : std::cout;
  info << std::setprecision(6) << "rule " << guf_rule_name(rule.get()) << ": " << guf_sigma_set_size(set.get())
       << " points, beta " << guf_sigma_set_beta(set.get()) << "\n"
       << "residuals: |sum w - 1| " << weight_sum << ", mean " << mean << ", covariance " << covariance << "\n";
  return 0;
}

int cmd_bench(const ScenarioOptions& o, const std::string& rules, const std::string& out_dir, unsigned threads) {
  ScenarioPtr scenario = open_scenario(o);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw CommandError("cannot create '" + out_dir + "': " + ec.message());

  const auto start = std::chrono::steady_clock::now();
  guf_bench* bench_raw = nullptr;
  check(guf_bench_run(scenario.get(), rules.empty() ? nullptr : rules.c_str(), threads, &bench_raw));
  BenchPtr bench(bench_raw);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const std::string csv = (std::filesystem::path(out_dir) / "rmse.csv").string();
  const std::string summary = (std::filesystem::path(out_dir) / "summary.json").string();
  check(guf_bench_write_csv(bench.get(), csv.c_str()));
  check(guf_bench_write_summary(bench.get(), summary.c_str(), csv.c_str()));

  std::printf("%-40s %8s %14s %12s %9s\n", "filter", "samples", "mean_pos_m", "runtime_s", "diverged");
  for (size_t i = 0; i < guf_bench_filter_count(bench.get()); ++i) {
    size_t samples = 0;
    double pos = 0.0, runtime = 0.0;
    int diverged = 0;
    check(guf_bench_filter_stats(bench.get(), i, &samples, &pos, &runtime, &diverged));
    std::printf("%-40s %8zu %14.4f %12.4f %9d\n", guf_bench_filter_name(bench.get(), i), samples, pos, runtime,
                diverged);
  }
  std::printf("wrote %s and %s (%.2f s)\n", csv.c_str(), summary.c_str(), wall);
  return 0;
}

nlohmann::json read_summary(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CommandError("cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw CommandError(path + ": " + e.what());
  }
  if (!j.is_object() || j.value("schema", "") != "guf-bench-summary/1" || !j.contains("filters") ||
      !j["filters"].is_array()) {
    throw CommandError(path + ": not a guf-bench-summary/1 document");
  }
  return j;
}

double number_or_nan(const nlohmann::json& j, const char* key) {
  return j.contains(key) && j[key].is_number() ? j[key].get<double>() : std::nan("");
}

int cmd_compare(const std::vector<std::string>& paths) {
  std::vector<nlohmann::json> docs;
  for (const auto& p : paths) docs.push_back(read_summary(p));
  const auto& base_filters = docs.front()["filters"];
  if (base_filters.empty()) throw CommandError(paths.front() + ": no filters");
  auto baseline_for = [&](const std::string& name) -> const nlohmann::json& {
    for (const auto& f : base_filters) {
      if (f.value("name", "") == name) return f;
    }
    return base_filters.front();
  };

  std::printf("%-24s %-32s %8s %9s %12s %12s %10s %8s\n", "summary", "filter", "samples", "diverged", "mean_pos_m",
              "d_pos_m", "runtime_s", "t_ratio");
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const std::string label = std::filesystem::path(paths[i]).parent_path().filename().string() + "/" +
                              std::filesystem::path(paths[i]).filename().string();
    for (const auto& f : docs[i]["filters"]) {
      const std::string name = f.value("name", "");
      const auto& base = baseline_for(name);
      const double pos = number_or_nan(f, "mean_rmse_pos_m");
      const double runtime = number_or_nan(f, "runtime_s");
      const double base_runtime = number_or_nan(base, "runtime_s");
      std::printf("%-24s %-32s %8lld %9lld %12.4f %12.4f %10.4f %8.3f\n", label.c_str(), name.c_str(),
                  f.value("sample_count", -1LL), f.value("diverged_runs", -1LL), pos,
                  pos - number_or_nan(base, "mean_rmse_pos_m"), runtime,
                  base_runtime > 0.0 ? runtime / base_runtime : std::nan(""));
    }
  }
  std::printf("deltas and runtime ratios are against the same-named filter in %s (else its first filter)\n",
              paths.front().c_str());
  return 0;
}

int cmd_simulate(const ScenarioOptions& o, int run, const std::string& out) {
  ScenarioPtr scenario = open_scenario(o);
  check(guf_scenario_simulate(scenario.get(), run, out.c_str()));
  return 0;
}

int cmd_track(const ScenarioOptions& o, const std::string& rule, int run, const std::string& out) {
  ScenarioPtr scenario = open_scenario(o);
  check(guf_scenario_track(scenario.get(), rule.c_str(), run, out.c_str()));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geometric unscented filtering toolkit"};
  app.set_version_flag("--version", std::string(guf_version()));
  app.require_subcommand(1);

  int dim = 0;
  std::vector<double> levels;
  auto* quantile = app.add_subcommand("quantile", "radial values r with P(chi2_dim > r) = d");
  quantile->add_option("--dim", dim, "dimension")->required()->check(CLI::PositiveNumber);
  quantile->add_option("--d", levels, "importance levels in (0, 1]")->required()->delimiter(',');

  std::string belief_path, rule_spec, out = "-";
  auto* sample = app.add_subcommand("sample", "write a sigma set as CSV");
  sample->add_option("--belief", belief_path, "belief file (mean, cov or cov_diag)")->required();
  sample->add_option("--rule", rule_spec, "rule token, e.g. guf:n=3:levels=closed")->required();
  sample->add_option("--out", out, "output CSV, '-' for stdout");

  ScenarioOptions bench_opts;
  std::string rules, out_dir = ".";
  unsigned threads = 0;
  auto* bench = app.add_subcommand("bench", "Monte Carlo RMSE benchmark");
  add_scenario_options(bench, bench_opts, true);
  bench->add_option("--rules", rules, "comma-separated rule tokens (default: the scenario's list)");
  bench->add_option("--out", out_dir, "output directory for rmse.csv and summary.json");
  bench->add_option("--threads", threads, "worker threads, 0 = hardware concurrency");

  std::vector<std::string> summaries;
  auto* compare = app.add_subcommand("compare", "compare benchmark summaries");
  compare->add_option("summaries", summaries, "summary.json files")->required()->expected(2, -1)->check(
      CLI::ExistingFile);

  ScenarioOptions sim_opts;
  int run = 0;
  std::string sim_out = "-";
  auto* simulate = app.add_subcommand("simulate", "truth and measurements of one run as CSV");
  add_scenario_options(simulate, sim_opts, false);
  simulate->add_option("--run", run, "run index")->check(CLI::NonNegativeNumber);
  simulate->add_option("--out", sim_out, "output CSV, '-' for stdout");

  ScenarioOptions track_opts;
  std::string track_rule = "guf:n=2", track_out = "-";
  int track_run = 0;
  auto* track = app.add_subcommand("track", "filter one simulated run and write the trajectory");
  add_scenario_options(track, track_opts, false);
  track->add_option("--rule", track_rule, "rule token");
  track->add_option("--run", track_run, "run index")->check(CLI::NonNegativeNumber);
  track->add_option("--out", track_out, "output CSV, '-' for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*quantile) return cmd_quantile(dim, levels);
    if (*sample) return cmd_sample(belief_path, rule_spec, out);
    if (*bench) return cmd_bench(bench_opts, rules, out_dir, threads);
    if (*compare) return cmd_compare(summaries);
    if (*simulate) return cmd_simulate(sim_opts, run, sim_out);
    if (*track) return cmd_track(track_opts, track_rule, track_run, track_out);
  } catch (const CommandError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
