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

#ifndef GUF_GUF_H_
#define GUF_GUF_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(GUF_BUILDING_LIBRARY)
#define GUF_API __declspec(dllexport)
#else
#define GUF_API __declspec(dllimport)
#endif
#else
#define GUF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum guf_status {
  GUF_OK = 0,
  GUF_ERR_INVALID_ARGUMENT = 1,
  GUF_ERR_NOT_POSITIVE_DEFINITE = 2,
  GUF_ERR_ZERO_TAIL_MASS = 3,
  GUF_ERR_NON_CONVERGENT = 4,
  GUF_ERR_ZERO_VECTOR = 5,
  GUF_ERR_ORDER_VIOLATION = 6,
  GUF_ERR_NEGATIVE_STRETCH_RADIUS = 7,
  GUF_ERR_SCALE_DEGENERATE = 8,
  GUF_ERR_DIMENSION_TOO_LARGE = 9,
  GUF_ERR_ORIGIN_SINGULAR = 10,
  GUF_ERR_SHAPE_MISMATCH = 11,
  GUF_ERR_PARSE = 12,
  GUF_ERR_IO = 13,
  GUF_ERR_NULL_ARGUMENT = 14,
  GUF_ERR_OUT_OF_RANGE = 15,
  GUF_ERR_INTERNAL = 99
} guf_status;

typedef struct guf_belief guf_belief;
typedef struct guf_rule guf_rule;
typedef struct guf_sigma_set guf_sigma_set;
typedef struct guf_scenario guf_scenario;
typedef struct guf_bench guf_bench;

/* Static description of a status code. */
GUF_API const char* guf_status_string(guf_status status);

/* Message of the last failed call on this thread; empty after success. */
GUF_API const char* guf_last_error(void);

GUF_API const char* guf_version(void);

/* ---- chi-square radial values ---- */

/* P(chi2_n > r). */
GUF_API guf_status guf_chi2_survival(int n, double r, double* out);

/* r with P(chi2_n > r) = d, d in (0, 1]. */
GUF_API guf_status guf_chi2_quantile(int n, double d, double* out);

/* ---- Gaussian beliefs ---- */

/* `mean` has n entries, `covariance` n*n entries in row-major order. */
GUF_API guf_status guf_belief_create(int n, const double* mean, const double* covariance, guf_belief** out);

/* Key/value belief file: `mean = ...` plus `cov = r1; r2; ...` or `cov_diag = ...`. */
GUF_API guf_status guf_belief_load(const char* path, guf_belief** out);

GUF_API int guf_belief_dimension(const guf_belief* belief);
GUF_API void guf_belief_destroy(guf_belief* belief);

/* ---- sampling rules ---- */

/* Parses a rule token such as "ckf3", "gukf:kappa=1" or "guf:n=3:levels=closed". */
GUF_API guf_status guf_rule_parse(const char* spec, int dimension, guf_rule** out);
GUF_API const char* guf_rule_name(const guf_rule* rule);
GUF_API int guf_rule_resamples(const guf_rule* rule);
GUF_API void guf_rule_destroy(guf_rule* rule);

/* ---- sigma sets ---- */

GUF_API guf_status guf_sigma_set_build(const guf_belief* belief, const guf_rule* rule, guf_sigma_set** out);
GUF_API size_t guf_sigma_set_size(const guf_sigma_set* set);
GUF_API int guf_sigma_set_dimension(const guf_sigma_set* set);

/* Stretch beta; zero for rules without levels. */
GUF_API double guf_sigma_set_beta(const guf_sigma_set* set);
GUF_API guf_status guf_sigma_set_weight(const guf_sigma_set* set, size_t index, double* out);

/* Writes `dimension` coordinates of point `index` into `out`. */
GUF_API guf_status guf_sigma_set_point(const guf_sigma_set* set, size_t index, double* out);
GUF_API guf_status guf_sigma_set_level(const guf_sigma_set* set, size_t index, int* out);

/* Max-abs residuals of weight sum, weighted mean and weighted covariance
 * against the belief the set was built from. Any pointer may be NULL. */
GUF_API guf_status guf_sigma_set_moment_residuals(const guf_sigma_set* set, double* weight_sum, double* mean,
                                                  double* covariance);

/* CSV rows `level,d,r,weight,x1..xn`; path "-" writes to stdout. */
GUF_API guf_status guf_sigma_set_write_csv(const guf_sigma_set* set, const char* path);
GUF_API void guf_sigma_set_destroy(guf_sigma_set* set);

/* ---- tracking scenarios ---- */

/* File path, or a bundled name "scenario1".."scenario4". */
GUF_API guf_status guf_scenario_load(const char* path_or_name, guf_scenario** out);
GUF_API guf_status guf_scenario_set_runs(guf_scenario* scenario, int runs);
GUF_API guf_status guf_scenario_set_steps(guf_scenario* scenario, int steps);
GUF_API guf_status guf_scenario_set_seed(guf_scenario* scenario, uint64_t seed);
GUF_API guf_status guf_scenario_set_q2_literal(guf_scenario* scenario, int literal);
GUF_API const char* guf_scenario_name(const guf_scenario* scenario);
GUF_API const char* guf_scenario_default_rules(const guf_scenario* scenario);
GUF_API void guf_scenario_destroy(guf_scenario* scenario);

/* Truth and measurements of one run as CSV; path "-" writes to stdout. */
GUF_API guf_status guf_scenario_simulate(const guf_scenario* scenario, int run, const char* path);

/* Filters one simulated run with `rule_spec` and writes the trajectory CSV. */
GUF_API guf_status guf_scenario_track(const guf_scenario* scenario, const char* rule_spec, int run, const char* path);

/* ---- Monte Carlo benchmark ---- */

/* `rules` is a comma-separated rule list, or NULL for the scenario's default.
 * `threads` = 0 uses the hardware concurrency. */
GUF_API guf_status guf_bench_run(const guf_scenario* scenario, const char* rules, unsigned threads, guf_bench** out);
GUF_API guf_status guf_bench_write_csv(const guf_bench* bench, const char* path);

/* Summary JSON; `csv_path` is recorded in it as the companion output. */
GUF_API guf_status guf_bench_write_summary(const guf_bench* bench, const char* path, const char* csv_path);
GUF_API size_t guf_bench_filter_count(const guf_bench* bench);
/* Empty string for a NULL handle or an index past the end. */
GUF_API const char* guf_bench_filter_name(const guf_bench* bench, size_t index);
GUF_API guf_status guf_bench_filter_stats(const guf_bench* bench, size_t index, size_t* sample_count,
                                          double* mean_position_rmse, double* runtime_seconds, int* diverged_runs);
GUF_API void guf_bench_destroy(guf_bench* bench);

#ifdef __cplusplus
}
#endif

#endif  // GUF_GUF_H_
