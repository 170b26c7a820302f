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

#include "guf/guf.h"

#include <cmath>
#include <exception>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <utility>

#include "errors.hpp"
#include "rule_spec.hpp"
#include "text_config.hpp"
#include "tracking_bench.hpp"

struct guf_belief {
  guf::GaussianBelief value;
};

struct guf_rule {
  guf::SamplingRule value;
};

struct guf_sigma_set {
  guf::SigmaSet value;
  guf::GaussianBelief source;
};

struct guf_scenario {
  guf::bench::ScenarioConfig value;
};

struct guf_bench {
  guf::bench::BenchResult value;
};

namespace {

thread_local std::string last_error;

guf_status to_status(guf::ErrorCode code) {
  switch (code) {
    case guf::ErrorCode::InvalidArgument: return GUF_ERR_INVALID_ARGUMENT;
    case guf::ErrorCode::NotPositiveDefinite: return GUF_ERR_NOT_POSITIVE_DEFINITE;
    case guf::ErrorCode::ZeroTailMass: return GUF_ERR_ZERO_TAIL_MASS;
    case guf::ErrorCode::NonConvergent: return GUF_ERR_NON_CONVERGENT;
    case guf::ErrorCode::ZeroVector: return GUF_ERR_ZERO_VECTOR;
    case guf::ErrorCode::OrderViolation: return GUF_ERR_ORDER_VIOLATION;
    case guf::ErrorCode::NegativeStretchRadius: return GUF_ERR_NEGATIVE_STRETCH_RADIUS;
    case guf::ErrorCode::ScaleDegenerate: return GUF_ERR_SCALE_DEGENERATE;
    case guf::ErrorCode::DimensionTooLarge: return GUF_ERR_DIMENSION_TOO_LARGE;
    case guf::ErrorCode::OriginSingular: return GUF_ERR_ORIGIN_SINGULAR;
    case guf::ErrorCode::ShapeMismatch: return GUF_ERR_SHAPE_MISMATCH;
    case guf::ErrorCode::ParseError: return GUF_ERR_PARSE;
    case guf::ErrorCode::IoError: return GUF_ERR_IO;
  }
  return GUF_ERR_INTERNAL;
}

guf_status fail(guf_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

template <typename F>
guf_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return GUF_OK;
  } catch (const guf::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(GUF_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(GUF_ERR_INTERNAL, e.what());
  }
}

#define GUF_REQUIRE(ptr)                                                   \
  do {                                                                     \
    if ((ptr) == nullptr) return fail(GUF_ERR_NULL_ARGUMENT, #ptr " is NULL"); \
  } while (0)

/// Runs `write` against stdout for "-", otherwise against a fresh file.
template <typename F>
void with_output(const char* path, F&& write) {
  const std::string target(path);
  if (target == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(target, std::ios::binary);
  if (!out) throw guf::Error(guf::ErrorCode::IoError, "cannot write '" + target + "'");
  write(out);
  out.close();
  if (!out) throw guf::Error(guf::ErrorCode::IoError, "write failed for '" + target + "'");
}

}  // namespace

extern "C" {

const char* guf_status_string(guf_status status) {
  switch (status) {
    case GUF_OK: return "ok";
    case GUF_ERR_INVALID_ARGUMENT: return "invalid argument";
    case GUF_ERR_NOT_POSITIVE_DEFINITE: return "matrix not positive definite";
    case GUF_ERR_ZERO_TAIL_MASS: return "zero tail mass";
    case GUF_ERR_NON_CONVERGENT: return "iteration did not converge";
    case GUF_ERR_ZERO_VECTOR: return "zero vector";
    case GUF_ERR_ORDER_VIOLATION: return "order violation";
    case GUF_ERR_NEGATIVE_STRETCH_RADIUS: return "negative stretch radius";
    case GUF_ERR_SCALE_DEGENERATE: return "degenerate scale";
    case GUF_ERR_DIMENSION_TOO_LARGE: return "dimension too large";
    case GUF_ERR_ORIGIN_SINGULAR: return "measurement singular at origin";
    case GUF_ERR_SHAPE_MISMATCH: return "shape mismatch";
    case GUF_ERR_PARSE: return "parse error";
    case GUF_ERR_IO: return "i/o error";
    case GUF_ERR_NULL_ARGUMENT: return "null argument";
    case GUF_ERR_OUT_OF_RANGE: return "index out of range";
    case GUF_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* guf_last_error(void) { return last_error.c_str(); }

const char* guf_version(void) { return GUF_VERSION_STRING; }

guf_status guf_chi2_survival(int n, double r, double* out) {
  GUF_REQUIRE(out);
  return guarded([&] { *out = guf::chi_square_survival(n, r); });
}

guf_status guf_chi2_quantile(int n, double d, double* out) {
  GUF_REQUIRE(out);
  return guarded([&] { *out = guf::chi_square_upper_quantile(n, d); });
}

guf_status guf_belief_create(int n, const double* mean, const double* covariance, guf_belief** out) {
  GUF_REQUIRE(mean);
  GUF_REQUIRE(covariance);
  GUF_REQUIRE(out);
  if (n < 1) return fail(GUF_ERR_INVALID_ARGUMENT, "dimension must be >= 1");
  return guarded([&] {
    guf::GaussianBelief belief;
    belief.mean = Eigen::Map<const guf::Vector>(mean, n);
    belief.covariance = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        covariance, n, n);
    belief.validate();
    guf::cholesky(belief.covariance);
    *out = new guf_belief{std::move(belief)};
  });
}

guf_status guf_belief_load(const char* path, guf_belief** out) {
  GUF_REQUIRE(path);
  GUF_REQUIRE(out);
  return guarded([&] {
    auto belief = guf::load_belief(path);
    belief.validate();
    guf::cholesky(belief.covariance);
    *out = new guf_belief{std::move(belief)};
  });
}

int guf_belief_dimension(const guf_belief* belief) { return belief ? belief->value.dimension() : 0; }

void guf_belief_destroy(guf_belief* belief) { delete belief; }

guf_status guf_rule_parse(const char* spec, int dimension, guf_rule** out) {
  GUF_REQUIRE(spec);
  GUF_REQUIRE(out);
  if (dimension < 1) return fail(GUF_ERR_INVALID_ARGUMENT, "dimension must be >= 1");
  return guarded([&] { *out = new guf_rule{guf::parse_rule(spec, dimension)}; });
}

const char* guf_rule_name(const guf_rule* rule) { return rule ? rule->value.name().c_str() : ""; }

int guf_rule_resamples(const guf_rule* rule) { return rule && rule->value.resample() ? 1 : 0; }

void guf_rule_destroy(guf_rule* rule) { delete rule; }

guf_status guf_sigma_set_build(const guf_belief* belief, const guf_rule* rule, guf_sigma_set** out) {
  GUF_REQUIRE(belief);
  GUF_REQUIRE(rule);
  GUF_REQUIRE(out);
  return guarded([&] { *out = new guf_sigma_set{rule->value.generate(belief->value), belief->value}; });
}

size_t guf_sigma_set_size(const guf_sigma_set* set) { return set ? static_cast<size_t>(set->value.size()) : 0; }

int guf_sigma_set_dimension(const guf_sigma_set* set) { return set ? set->value.dimension() : 0; }

double guf_sigma_set_beta(const guf_sigma_set* set) { return set ? set->value.stretch : 0.0; }

guf_status guf_sigma_set_weight(const guf_sigma_set* set, size_t index, double* out) {
  GUF_REQUIRE(set);
  GUF_REQUIRE(out);
  if (index >= guf_sigma_set_size(set)) return fail(GUF_ERR_OUT_OF_RANGE, "point index out of range");
  *out = set->value.weights(static_cast<Eigen::Index>(index));
  return GUF_OK;
}

guf_status guf_sigma_set_point(const guf_sigma_set* set, size_t index, double* out) {
  GUF_REQUIRE(set);
  GUF_REQUIRE(out);
  if (index >= guf_sigma_set_size(set)) return fail(GUF_ERR_OUT_OF_RANGE, "point index out of range");
  const auto column = set->value.points.col(static_cast<Eigen::Index>(index));
  for (Eigen::Index i = 0; i < column.size(); ++i) out[i] = column(i);
  return GUF_OK;
}

guf_status guf_sigma_set_level(const guf_sigma_set* set, size_t index, int* out) {
  GUF_REQUIRE(set);
  GUF_REQUIRE(out);
  if (index >= guf_sigma_set_size(set)) return fail(GUF_ERR_OUT_OF_RANGE, "point index out of range");
  *out = set->value.level[index];
  return GUF_OK;
}

guf_status guf_sigma_set_moment_residuals(const guf_sigma_set* set, double* weight_sum, double* mean,
                                          double* covariance) {
  GUF_REQUIRE(set);
  const auto& s = set->value;
  const auto& b = set->source;
  if (weight_sum) *weight_sum = std::abs(s.weights.sum() - 1.0);
  if (mean) *mean = (s.weighted_mean() - b.mean).cwiseAbs().maxCoeff();
  if (covariance) *covariance = (s.weighted_covariance(b.mean) - b.covariance).cwiseAbs().maxCoeff();
  return GUF_OK;
}

guf_status guf_sigma_set_write_csv(const guf_sigma_set* set, const char* path) {
  GUF_REQUIRE(set);
  GUF_REQUIRE(path);
  return guarded([&] { with_output(path, [&](std::ostream& out) { guf::write_sigma_set_rows(out, set->value); }); });
}

void guf_sigma_set_destroy(guf_sigma_set* set) { delete set; }

guf_status guf_scenario_load(const char* path_or_name, guf_scenario** out) {
  GUF_REQUIRE(path_or_name);
  GUF_REQUIRE(out);
  return guarded([&] { *out = new guf_scenario{guf::bench::load_scenario(path_or_name)}; });
}

guf_status guf_scenario_set_runs(guf_scenario* scenario, int runs) {
  GUF_REQUIRE(scenario);
  if (runs < 1) return fail(GUF_ERR_INVALID_ARGUMENT, "runs must be >= 1");
  scenario->value.runs = runs;
  return GUF_OK;
}

guf_status guf_scenario_set_steps(guf_scenario* scenario, int steps) {
  GUF_REQUIRE(scenario);
  if (steps < 1) return fail(GUF_ERR_INVALID_ARGUMENT, "steps must be >= 1");
  scenario->value.steps = steps;
  return GUF_OK;
}

guf_status guf_scenario_set_seed(guf_scenario* scenario, uint64_t seed) {
  GUF_REQUIRE(scenario);
  scenario->value.seed = seed;
  return GUF_OK;
}

guf_status guf_scenario_set_q2_literal(guf_scenario* scenario, int literal) {
  GUF_REQUIRE(scenario);
  scenario->value.q2_literal = literal != 0;
  return GUF_OK;
}

const char* guf_scenario_name(const guf_scenario* scenario) { return scenario ? scenario->value.name.c_str() : ""; }

const char* guf_scenario_default_rules(const guf_scenario* scenario) {
  return scenario ? scenario->value.rules.c_str() : "";
}

void guf_scenario_destroy(guf_scenario* scenario) { delete scenario; }

guf_status guf_scenario_simulate(const guf_scenario* scenario, int run, const char* path) {
  GUF_REQUIRE(scenario);
  GUF_REQUIRE(path);
  if (run < 0 || run >= scenario->value.runs) return fail(GUF_ERR_OUT_OF_RANGE, "run index out of range");
  return guarded([&] {
    const auto record = guf::bench::simulate(scenario->value, run);
    with_output(path, [&](std::ostream& out) { guf::bench::write_simulation_rows(out, record); });
  });
}

guf_status guf_scenario_track(const guf_scenario* scenario, const char* rule_spec, int run, const char* path) {
  GUF_REQUIRE(scenario);
  GUF_REQUIRE(rule_spec);
  GUF_REQUIRE(path);
  if (run < 0 || run >= scenario->value.runs) return fail(GUF_ERR_OUT_OF_RANGE, "run index out of range");
  return guarded([&] {
    const auto& config = scenario->value;
    const auto rule = guf::parse_rule(rule_spec, 5);
    const auto record = guf::bench::simulate(config, run);
    const auto estimates = guf::run_filter(guf::bench::make_ct_model(config),
                                           guf::GaussianBelief{config.x0, config.p0}, record.measurements, rule);
    with_output(path, [&](std::ostream& out) { guf::write_trajectory_rows(out, estimates); });
  });
}

guf_status guf_bench_run(const guf_scenario* scenario, const char* rules, unsigned threads, guf_bench** out) {
  GUF_REQUIRE(scenario);
  GUF_REQUIRE(out);
  return guarded([&] {
    const std::string list = rules ? std::string(rules) : scenario->value.rules;
    if (guf::trim(list).empty()) throw guf::Error(guf::ErrorCode::InvalidArgument, "no rules given");
    const auto parsed = guf::parse_rule_list(list, 5);
    *out = new guf_bench{guf::bench::monte_carlo(scenario->value, parsed, threads)};
  });
}

guf_status guf_bench_write_csv(const guf_bench* bench, const char* path) {
  GUF_REQUIRE(bench);
  GUF_REQUIRE(path);
  return guarded([&] { with_output(path, [&](std::ostream& out) { guf::bench::write_rmse_csv(out, bench->value); }); });
}

guf_status guf_bench_write_summary(const guf_bench* bench, const char* path, const char* csv_path) {
  GUF_REQUIRE(bench);
  GUF_REQUIRE(path);
  return guarded([&] {
    const std::string text = guf::bench::summary_json(bench->value, csv_path ? csv_path : "");
    with_output(path, [&](std::ostream& out) { out << text; });
  });
}

size_t guf_bench_filter_count(const guf_bench* bench) { return bench ? bench->value.filters.size() : 0; }

const char* guf_bench_filter_name(const guf_bench* bench, size_t index) {
  if (!bench || index >= bench->value.filters.size()) return "";
  return bench->value.filters[index].name.c_str();
}

guf_status guf_bench_filter_stats(const guf_bench* bench, size_t index, size_t* sample_count,
                                  double* mean_position_rmse, double* runtime_seconds, int* diverged_runs) {
  GUF_REQUIRE(bench);
  if (index >= bench->value.filters.size()) return fail(GUF_ERR_OUT_OF_RANGE, "filter index out of range");
  const auto& f = bench->value.filters[index];
  if (sample_count) *sample_count = static_cast<size_t>(f.sample_count);
  if (mean_position_rmse) *mean_position_rmse = f.mean_position();
  if (runtime_seconds) *runtime_seconds = f.runtime_seconds;
  if (diverged_runs) *diverged_runs = f.series.diverged_runs;
  return GUF_OK;
}

void guf_bench_destroy(guf_bench* bench) { delete bench; }

}  // extern "C"
