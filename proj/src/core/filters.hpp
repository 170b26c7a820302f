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
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gus_sampler.hpp"

namespace guf {

// ---------------------------------------------------------------------------
// Sampling rules

/// Symmetric unscented points, 2n + 1 of them, center weight kappa/(n+kappa).
SigmaSet ut_points(const GaussianBelief& belief, double kappa);

/// Third-degree spherical-radial cubature: 2n points of weight 1/(2n).
SigmaSet ckf3_points(const GaussianBelief& belief);

/// Fifth-degree cubature with 2n^2 + 1 points. The axis weight
/// (4 - n) / (2 (n + 2)^2) is negative for n > 4.
SigmaSet ckf5_points(const GaussianBelief& belief);

/// Nodes and weights of the m-point Gauss-Hermite rule for a unit-variance
/// Gaussian (Golub-Welsch). Nodes ascending, weights summing to one.
struct HermiteRule1d {
  std::vector<double> nodes;
  std::vector<double> weights;
};
HermiteRule1d gauss_hermite_1d(int m);

/// Tensor-product Gauss-Hermite points (m^n). Throws
/// ErrorCode::DimensionTooLarge beyond `max_points`.
SigmaSet gh_points(const GaussianBelief& belief, int m, std::size_t max_points = 1'000'000);

/// Options for the geometric unscented rule. `catalogue` holds candidate
/// reference samplings. Without an allocation policy the catalogue is used
/// as given: one entry per level, or a single entry repeated on every level.
struct GusConfig {
  int level_count = 1;
  LevelMode mode = LevelMode::Grid;
  std::uint64_t seed = 0;
  std::vector<ReferenceSampling> catalogue;
  std::optional<Allocation> allocation;
  /// Strictly increasing importance values; when set, replaces level_count
  /// and mode.
  std::vector<double> explicit_levels;
};

/// GUS rule resolved for one state dimension.
struct GusRule {
  int dimension = 0;
  std::vector<ImportanceLevel> levels;
  std::vector<ReferenceSampling> designs;

  Eigen::Index point_count() const;
};

GusRule make_gus_rule(const GusConfig& config, int dimension);

SigmaSet gus_points(const GaussianBelief& belief, const GusRule& rule);

struct UtRule {
  double kappa = 0.0;
};
struct Ckf3Rule {};
struct Ckf5Rule {};
struct GaussHermiteRule {
  int points_per_axis = 3;
  std::size_t max_points = 1'000'000;
};

class SamplingRule {
 public:
  using Variant = std::variant<UtRule, Ckf3Rule, Ckf5Rule, GaussHermiteRule, GusRule>;

  SamplingRule(Variant variant, bool resample, std::string name);

  /// Plain UT reuses the propagated points in the measurement update; pass
  /// resample = true for the Gaussian UKF variant.
  static SamplingRule ut(double kappa, bool resample = false);
  static SamplingRule ckf3();
  static SamplingRule ckf5();
  static SamplingRule gauss_hermite(int points_per_axis);
  static SamplingRule gus(const GusConfig& config, int dimension);

  SigmaSet generate(const GaussianBelief& belief) const;

  const Variant& variant() const { return variant_; }
  bool resample() const { return resample_; }
  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

 private:
  Variant variant_;
  bool resample_;
  std::string name_;
};

// ---------------------------------------------------------------------------
// Gaussian filtering loop

struct StateSpaceModel {
  int state_dim = 0;
  int measurement_dim = 0;
  std::function<Vector(const Vector&)> process;
  std::function<Vector(const Vector&)> measurement;
  Matrix process_noise;
  Matrix measurement_noise;
  /// Difference z1 - z2 in measurement space. Plain subtraction if unset.
  std::function<Vector(const Vector&, const Vector&)> residual;
  /// Weighted mean of measurement samples (columns of z). Plain weighted
  /// sum if unset.
  std::function<Vector(const Matrix& z, const Vector& weights)> measurement_mean;
};

struct Prediction {
  GaussianBelief belief;
  /// f applied to the generated points, weights carried over.
  SigmaSet propagated;
  bool diverged = false;
};

struct FilterEstimate {
  GaussianBelief posterior;
  GaussianBelief predicted;
  Matrix innovation_covariance;
  Matrix cross_covariance;
  Matrix gain;
  bool diverged = false;
};

Prediction predict(const StateSpaceModel& model, const GaussianBelief& belief, const SamplingRule& rule);

/// Measurement update. On a factorization failure the filter coasts
/// (posterior = predicted) and the estimate is flagged diverged.
FilterEstimate update(const StateSpaceModel& model, const Prediction& prediction, const Vector& y,
                      const SamplingRule& rule);

/// Folds predict/update over the measurement columns. Never throws for
/// numerical failure; divergence is recorded per step.
std::vector<FilterEstimate> run_filter(const StateSpaceModel& model, const GaussianBelief& initial,
                                       const Matrix& measurements, const SamplingRule& rule);

struct LinearModel {
  Matrix transition;
  Matrix observation;
  Matrix process_noise;
  Matrix measurement_noise;
};

struct KalmanStep {
  GaussianBelief predicted;
  GaussianBelief posterior;
  Matrix gain;
};

/// Closed-form Kalman recursion, used as the oracle for linear models.
std::vector<KalmanStep> kalman_reference(const LinearModel& model, const GaussianBelief& initial,
                                         const Matrix& measurements);

StateSpaceModel to_state_space(const LinearModel& model);

/// `step,m1..mn,p11..pnn,diverged` rows with a header line.
void write_trajectory_rows(std::ostream& out, const std::vector<FilterEstimate>& estimates);

}  // namespace guf
