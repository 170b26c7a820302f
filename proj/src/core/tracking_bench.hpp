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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "filters.hpp"

namespace guf::bench {

/// Two-component measurement-noise mixture w N(0, R1) + (1 - w) N(0, R2).
/// Matrices are in SI units (m^2, m rad, rad^2).
struct MixtureNoise {
  Matrix r1;
  Matrix r2;
  double weight = 0.5;

  Matrix covariance() const { return weight * r1 + (1.0 - weight) * r2; }
};

/// Coordinated-turn scenario. All angles in radians; state order is
/// (x, vx, y, vy, turn rate).
struct ScenarioConfig {
  std::string name = "scenario";
  double turn_rate = -3.0 * 3.14159265358979323846 / 180.0;  // rad/s
  double dt = 1.0;                                           // s
  double q1 = 1.0;                                           // m^2 s^-3
  double q2 = 1.75e-3;                                       // s^-3
  bool q2_literal = false;
  double sigma_r = 1000.0;      // m^2
  double sigma_theta = 100e-6;  // rad^2
  Vector x0;
  Matrix p0;
  int steps = 200;
  int runs = 50;
  std::optional<MixtureNoise> mixture;
  std::uint64_t seed = 42;
  /// Default rule list for `bench` when none is given.
  std::string rules;

  ScenarioConfig();

  /// Throws ErrorCode::InvalidArgument.
  void validate() const;
  Matrix process_noise() const;
  /// Covariance the filters assume: diag(sigma_r, sigma_theta), or the
  /// mixture's overall covariance.
  Matrix measurement_noise() const;
};

/// Parses the key/value scenario format (see scenarios/*.cfg). Unit
/// conversions happen here.
ScenarioConfig parse_scenario(std::string_view text, const std::string& source);

/// Loads a file path, or a bundled scenario by name (scenario1..scenario4).
ScenarioConfig load_scenario(const std::string& path_or_name);
std::vector<std::string> bundled_scenario_names();

/// One noise-free coordinated-turn step using the turn rate stored in x(4).
Vector ct_transition(const Vector& x, double dt);

/// blockdiag(q1 M, q1 M, q2 dt) with M = [[dt^3/3, dt^2/2], [dt^2/2, dt]];
/// the last block is bare q2 when `q2_literal`. Requires q1, q2, dt > 0.
Matrix ct_process_noise(double q1, double q2, double dt, bool q2_literal = false);

/// (range, bearing) from the origin; bearing in (-pi, pi]. Throws
/// ErrorCode::OriginSingular at the origin.
Vector range_bearing(const Vector& x);

/// Wraps an angle into (-pi, pi].
double wrap_angle(double angle);

/// Filter model for the scenario, with bearing residual wrapping and a
/// circular mean for the bearing component.
StateSpaceModel make_ct_model(const ScenarioConfig& config);

struct SimulationRecord {
  Matrix truth;         // 5 x steps
  Matrix measurements;  // 2 x steps, (range m, bearing rad)
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

/// Truth and measurements for one Monte Carlo run, reproducible from
/// (config.seed, run).
SimulationRecord simulate(const ScenarioConfig& config, int run);

void write_simulation_rows(std::ostream& out, const SimulationRecord& record);

struct RmseSeries {
  Vector position;  // m
  Vector velocity;  // m/s
  Vector turn_rate; // rad/s
  int used_runs = 0;
  int diverged_runs = 0;
};

/// Per-step RMSE across runs. Each matrix is 5 x steps. Diverged runs are
/// excluded and counted. Throws ErrorCode::ShapeMismatch.
RmseSeries rmse(const std::vector<Matrix>& truths, const std::vector<Matrix>& estimates,
                const std::vector<bool>& diverged);

struct FilterReport {
  std::string name;
  Eigen::Index sample_count = 0;
  RmseSeries series;
  double runtime_seconds = 0.0;

  double mean_position() const { return series.position.mean(); }
  double mean_velocity() const { return series.velocity.mean(); }
  double mean_turn_rate() const { return series.turn_rate.mean(); }
};

struct BenchResult {
  ScenarioConfig config;
  std::vector<FilterReport> filters;
};

/// Runs every rule over shared simulations (common random numbers).
/// `threads` = 0 picks the hardware concurrency. Results do not depend on
/// the thread count.
BenchResult monte_carlo(const ScenarioConfig& config, const std::vector<SamplingRule>& rules, unsigned threads = 0);

/// `step,filter,rmse_pos_m,rmse_vel_mps,rmse_turn_radps`, ordered by step
/// then filter name.
void write_rmse_csv(std::ostream& out, const BenchResult& result);

/// JSON summary and run manifest.
std::string summary_json(const BenchResult& result, const std::string& csv_path);

}  // namespace guf::bench
