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

#include "filters.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace guf {

namespace {

SigmaSet symmetric_axis_set(const GaussianBelief& belief, double scale, double center_weight, double axis_weight,
                            bool with_center) {
  belief.validate();
  const auto factor = cholesky(belief.covariance);
  const int n = belief.dimension();
  const Eigen::Index count = 2 * n + (with_center ? 1 : 0);
  SigmaSet set;
  set.points.resize(n, count);
  set.weights.resize(count);
  set.level.assign(static_cast<std::size_t>(count), 0);
  Eigen::Index col = 0;
  if (with_center) {
    set.points.col(col) = belief.mean;
    set.weights(col++) = center_weight;
  }
  const Matrix offsets = std::sqrt(scale) * factor.lower;
  for (int i = 0; i < n; ++i) {
    set.points.col(col) = belief.mean + offsets.col(i);
    set.weights(col++) = axis_weight;
  }
  for (int i = 0; i < n; ++i) {
    set.points.col(col) = belief.mean - offsets.col(i);
    set.weights(col++) = axis_weight;
  }
  return set;
}

}  // namespace

SigmaSet ut_points(const GaussianBelief& belief, double kappa) {
  const double spread = belief.dimension() + kappa;
  if (!(spread > 0.0)) throw Error(ErrorCode::ScaleDegenerate, "ut_points: kappa + n must be positive");
  return symmetric_axis_set(belief, spread, kappa / spread, 0.5 / spread, true);
}

SigmaSet ckf3_points(const GaussianBelief& belief) {
  const double n = belief.dimension();
  return symmetric_axis_set(belief, n, 0.0, 0.5 / n, false);
}

SigmaSet ckf5_points(const GaussianBelief& belief) {
  belief.validate();
  const auto factor = cholesky(belief.covariance);
  const int n = belief.dimension();
  const double np2 = n + 2.0;
  const Eigen::Index count = 2 * n * n + 1;

  SigmaSet set;
  set.points.resize(n, count);
  set.weights.resize(count);
  set.level.assign(static_cast<std::size_t>(count), 0);

  Eigen::Index col = 0;
  set.points.col(col) = belief.mean;
  set.weights(col++) = 2.0 / np2;

  const double axis_weight = (4.0 - n) / (2.0 * np2 * np2);
  const Matrix axis = std::sqrt(np2) * factor.lower;
  for (int i = 0; i < n; ++i) {
    for (double sign : {1.0, -1.0}) {
      set.points.col(col) = belief.mean + sign * axis.col(i);
      set.weights(col++) = axis_weight;
    }
  }

  const double pair_weight = 1.0 / (np2 * np2);
  const Matrix pair = std::sqrt(np2 / 2.0) * factor.lower;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (double si : {1.0, -1.0}) {
        for (double sj : {1.0, -1.0}) {
          set.points.col(col) = belief.mean + si * pair.col(i) + sj * pair.col(j);
          set.weights(col++) = pair_weight;
        }
      }
    }
  }
  return set;
}

HermiteRule1d gauss_hermite_1d(int m) {
  if (m < 2) throw Error(ErrorCode::InvalidArgument, "gauss_hermite_1d: need at least two points");
  // Jacobi matrix of the probabilists' Hermite recurrence.
  Matrix jacobi = Matrix::Zero(m, m);
  for (int k = 1; k < m; ++k) {
    jacobi(k, k - 1) = std::sqrt(static_cast<double>(k));
    jacobi(k - 1, k) = jacobi(k, k - 1);
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(jacobi);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NonConvergent, "gauss_hermite_1d: eigenvalue solve failed");
  }
  HermiteRule1d rule;
  rule.nodes.resize(static_cast<std::size_t>(m));
  rule.weights.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    rule.nodes[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    const double v = solver.eigenvectors()(0, i);
    rule.weights[static_cast<std::size_t>(i)] = v * v;
  }
  // Enforce the exact symmetry of the rule.
  for (int i = 0; i < m / 2; ++i) {
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(m - 1 - i);
    const double node = 0.5 * (rule.nodes[hi] - rule.nodes[lo]);
    const double weight = 0.5 * (rule.weights[hi] + rule.weights[lo]);
    rule.nodes[lo] = -node;
    rule.nodes[hi] = node;
    rule.weights[lo] = rule.weights[hi] = weight;
  }
  if (m % 2 == 1) rule.nodes[static_cast<std::size_t>(m / 2)] = 0.0;
  double total = 0.0;
  for (double w : rule.weights) total += w;
  for (double& w : rule.weights) w /= total;
  return rule;
}

SigmaSet gh_points(const GaussianBelief& belief, int m, std::size_t max_points) {
  belief.validate();
  const int n = belief.dimension();
  std::size_t count = 1;
  for (int i = 0; i < n; ++i) {
    if (count > max_points / static_cast<std::size_t>(std::max(m, 1))) {
      throw Error(ErrorCode::DimensionTooLarge, "gh_points: m^n exceeds the point cap");
    }
    count *= static_cast<std::size_t>(m);
  }
  if (count > max_points) throw Error(ErrorCode::DimensionTooLarge, "gh_points: m^n exceeds the point cap");

  const HermiteRule1d rule = gauss_hermite_1d(m);
  const auto factor = cholesky(belief.covariance);

  SigmaSet set;
  set.points.resize(n, static_cast<Eigen::Index>(count));
  set.weights.resize(static_cast<Eigen::Index>(count));
  set.level.assign(count, 0);
  std::vector<int> index(static_cast<std::size_t>(n), 0);
  Vector node(n);
  for (std::size_t c = 0; c < count; ++c) {
    double weight = 1.0;
    for (int i = 0; i < n; ++i) {
      node(i) = rule.nodes[static_cast<std::size_t>(index[static_cast<std::size_t>(i)])];
      weight *= rule.weights[static_cast<std::size_t>(index[static_cast<std::size_t>(i)])];
    }
    set.points.col(static_cast<Eigen::Index>(c)) = belief.mean + factor.lower * node;
    set.weights(static_cast<Eigen::Index>(c)) = weight;
    for (int i = n - 1; i >= 0; --i) {
      if (++index[static_cast<std::size_t>(i)] < m) break;
      index[static_cast<std::size_t>(i)] = 0;
    }
  }
  return set;
}

Eigen::Index GusRule::point_count() const {
  Eigen::Index total = 0;
  for (const auto& design : designs) total += design.size();
  return total;
}

GusRule make_gus_rule(const GusConfig& config, int dimension) {
  if (dimension < 1) throw Error(ErrorCode::InvalidArgument, "GUS rule: dimension must be >= 1");
  GusRule rule;
  rule.dimension = dimension;
  if (!config.explicit_levels.empty()) {
    std::vector<ImportanceLevel> levels;
    for (double d : config.explicit_levels) {
      if (!levels.empty() && !(d > levels.back().d)) {
        throw Error(ErrorCode::OrderViolation, "GUS rule: importance values must be strictly increasing");
      }
      levels.push_back(ImportanceLevel{d, 0.0});
    }
    rule.levels = resolve_radii(std::move(levels), dimension);
  } else {
    std::optional<RandomSource> rng;
    if (config.mode == LevelMode::Random) rng.emplace(config.seed, 0);
    rule.levels =
        resolve_radii(importance_levels(config.level_count, config.mode, rng ? &*rng : nullptr), dimension);
  }

  std::vector<ReferenceSampling> catalogue = config.catalogue;
  if (catalogue.empty()) catalogue.push_back(scenario_design(dimension, 1));
  for (const auto& design : catalogue) {
    if (design.dimension() != dimension) {
      throw Error(ErrorCode::ShapeMismatch, "GUS rule: design dimension does not match the state");
    }
  }
  if (config.allocation) {
    rule.designs = allocate_designs(rule.levels, catalogue, *config.allocation);
  } else if (catalogue.size() == 1) {
    rule.designs.assign(rule.levels.size(), catalogue.front());
  } else if (catalogue.size() == rule.levels.size()) {
    rule.designs = std::move(catalogue);
  } else {
    throw Error(ErrorCode::InvalidArgument, "GUS rule: give one design, one per level, or an allocation policy");
  }
  return rule;
}

SigmaSet gus_points(const GaussianBelief& belief, const GusRule& rule) {
  if (belief.dimension() != rule.dimension) {
    throw Error(ErrorCode::ShapeMismatch, "gus_points: rule was built for another dimension");
  }
  return build_sigma_set(belief, rule.levels, rule.designs);
}

SamplingRule::SamplingRule(Variant variant, bool resample, std::string name)
    : variant_(std::move(variant)), resample_(resample), name_(std::move(name)) {}

SamplingRule SamplingRule::ut(double kappa, bool resample) {
  return SamplingRule(UtRule{kappa}, resample, resample ? "gukf" : "ukf");
}

SamplingRule SamplingRule::ckf3() { return SamplingRule(Ckf3Rule{}, true, "ckf3"); }

SamplingRule SamplingRule::ckf5() { return SamplingRule(Ckf5Rule{}, true, "ckf5"); }

SamplingRule SamplingRule::gauss_hermite(int points_per_axis) {
  if (points_per_axis < 2) throw Error(ErrorCode::InvalidArgument, "Gauss-Hermite: need m >= 2");
  return SamplingRule(GaussHermiteRule{points_per_axis}, true, "ghqf");
}

SamplingRule SamplingRule::gus(const GusConfig& config, int dimension) {
  return SamplingRule(make_gus_rule(config, dimension), true, "guf");
}

SigmaSet SamplingRule::generate(const GaussianBelief& belief) const {
  return std::visit(
      [&](const auto& rule) -> SigmaSet {
        using T = std::decay_t<decltype(rule)>;
        if constexpr (std::is_same_v<T, UtRule>) {
          return ut_points(belief, rule.kappa);
        } else if constexpr (std::is_same_v<T, Ckf3Rule>) {
          return ckf3_points(belief);
        } else if constexpr (std::is_same_v<T, Ckf5Rule>) {
          return ckf5_points(belief);
        } else if constexpr (std::is_same_v<T, GaussHermiteRule>) {
          return gh_points(belief, rule.points_per_axis, rule.max_points);
        } else {
          return gus_points(belief, rule);
        }
      },
      variant_);
}

namespace {

Matrix symmetrized(const Matrix& p) { return 0.5 * (p + p.transpose()); }

bool is_numerical_failure(const Error& e) {
  return e.code() == ErrorCode::NotPositiveDefinite || e.code() == ErrorCode::NegativeStretchRadius;
}

Vector residual_of(const StateSpaceModel& model, const Vector& a, const Vector& b) {
  return model.residual ? model.residual(a, b) : Vector(a - b);
}

}  // namespace

Prediction predict(const StateSpaceModel& model, const GaussianBelief& belief, const SamplingRule& rule) {
  Prediction prediction;
  try {
    SigmaSet set = rule.generate(belief);
    for (Eigen::Index j = 0; j < set.size(); ++j) set.points.col(j) = model.process(set.points.col(j));
    if (set.points.allFinite()) {
      const Vector mean = set.weighted_mean();
      prediction.belief.mean = mean;
      prediction.belief.covariance = symmetrized(set.weighted_covariance(mean) + model.process_noise);
      prediction.propagated = std::move(set);
      return prediction;
    }
  } catch (const Error& e) {
    if (!is_numerical_failure(e)) throw;
  }
  // Coast: push the mean through f and inflate by Q.
  prediction.diverged = true;
  const Vector moved = model.process(belief.mean);
  prediction.belief.mean = moved.allFinite() ? moved : belief.mean;
  prediction.belief.covariance = symmetrized(belief.covariance + model.process_noise);
  return prediction;
}

FilterEstimate update(const StateSpaceModel& model, const Prediction& prediction, const Vector& y,
                      const SamplingRule& rule) {
  FilterEstimate estimate;
  estimate.predicted = prediction.belief;
  estimate.posterior = prediction.belief;
  if (prediction.diverged) {
    estimate.diverged = true;
    return estimate;
  }

  try {
    const SigmaSet set = rule.resample() ? rule.generate(prediction.belief) : prediction.propagated;
    const Eigen::Index count = set.size();
    const int m = model.measurement_dim;

    Matrix z(m, count);
    for (Eigen::Index j = 0; j < count; ++j) z.col(j) = model.measurement(set.points.col(j));
    const Vector z_mean = model.measurement_mean ? model.measurement_mean(z, set.weights) : Vector(z * set.weights);

    Matrix dz(m, count);
    for (Eigen::Index j = 0; j < count; ++j) dz.col(j) = residual_of(model, z.col(j), z_mean);
    const Matrix dx = set.points.colwise() - prediction.belief.mean;

    estimate.innovation_covariance = symmetrized(dz * set.weights.asDiagonal() * dz.transpose() + model.measurement_noise);
    estimate.cross_covariance = dx * set.weights.asDiagonal() * dz.transpose();

    const auto factor = cholesky(estimate.innovation_covariance);
    estimate.gain = factor.solve_right(estimate.cross_covariance);

    const Vector innovation = residual_of(model, y, z_mean);
    GaussianBelief posterior;
    posterior.mean = prediction.belief.mean + estimate.gain * innovation;
    // Same value as P - K S K^T, summed over the points so that nothing
    // cancels when the measurement pins the state down.
    const Matrix spread = dx - estimate.gain * dz;
    Matrix covariance = spread * set.weights.asDiagonal() * spread.transpose() +
                        estimate.gain * model.measurement_noise * estimate.gain.transpose();
    if (!rule.resample()) covariance += model.process_noise;
    posterior.covariance = symmetrized(covariance);
    if (posterior.mean.allFinite() && posterior.covariance.allFinite()) {
      estimate.posterior = std::move(posterior);
      return estimate;
    }
  } catch (const Error& e) {
    if (!is_numerical_failure(e)) throw;
  }
  estimate.diverged = true;
  return estimate;
}

std::vector<FilterEstimate> run_filter(const StateSpaceModel& model, const GaussianBelief& initial,
                                       const Matrix& measurements, const SamplingRule& rule) {
  if (measurements.cols() < 1) throw Error(ErrorCode::InvalidArgument, "run_filter: no measurements");
  if (measurements.rows() != model.measurement_dim) {
    throw Error(ErrorCode::ShapeMismatch, "run_filter: measurement dimension mismatch");
  }
  initial.validate();
  std::vector<FilterEstimate> estimates;
  estimates.reserve(static_cast<std::size_t>(measurements.cols()));
  GaussianBelief belief = initial;
  for (Eigen::Index k = 0; k < measurements.cols(); ++k) {
    const Prediction prediction = predict(model, belief, rule);
    estimates.push_back(update(model, prediction, measurements.col(k), rule));
    belief = estimates.back().posterior;
  }
  return estimates;
}

std::vector<KalmanStep> kalman_reference(const LinearModel& model, const GaussianBelief& initial,
                                         const Matrix& measurements) {
  const auto n = model.transition.rows();
  if (model.transition.cols() != n || model.observation.cols() != n || model.process_noise.rows() != n ||
      model.measurement_noise.rows() != model.observation.rows() || measurements.rows() != model.observation.rows() ||
      initial.mean.size() != n) {
    throw Error(ErrorCode::ShapeMismatch, "kalman_reference: inconsistent dimensions");
  }
  std::vector<KalmanStep> steps;
  steps.reserve(static_cast<std::size_t>(measurements.cols()));
  GaussianBelief belief = initial;
  for (Eigen::Index k = 0; k < measurements.cols(); ++k) {
    KalmanStep step;
    step.predicted.mean = model.transition * belief.mean;
    step.predicted.covariance = symmetrized(model.transition * belief.covariance * model.transition.transpose() +
                                            model.process_noise);
    const Matrix s = symmetrized(model.observation * step.predicted.covariance * model.observation.transpose() +
                                 model.measurement_noise);
    const Matrix cross = step.predicted.covariance * model.observation.transpose();
    step.gain = cholesky(s).solve_right(cross);
    step.posterior.mean =
        step.predicted.mean + step.gain * (measurements.col(k) - model.observation * step.predicted.mean);
    step.posterior.covariance = symmetrized(step.predicted.covariance - step.gain * s * step.gain.transpose());
    belief = step.posterior;
    steps.push_back(std::move(step));
  }
  return steps;
}

StateSpaceModel to_state_space(const LinearModel& model) {
  StateSpaceModel ssm;
  ssm.state_dim = static_cast<int>(model.transition.rows());
  ssm.measurement_dim = static_cast<int>(model.observation.rows());
  ssm.process = [a = model.transition](const Vector& x) -> Vector { return a * x; };
  ssm.measurement = [h = model.observation](const Vector& x) -> Vector { return h * x; };
  ssm.process_noise = model.process_noise;
  ssm.measurement_noise = model.measurement_noise;
  return ssm;
}

void write_trajectory_rows(std::ostream& out, const std::vector<FilterEstimate>& estimates) {
  if (estimates.empty()) return;
  const int n = estimates.front().posterior.dimension();
  const auto precision = out.precision(12);
  out << "step";
  for (int i = 0; i < n; ++i) out << ",m" << (i + 1);
  for (int i = 0; i < n; ++i) out << ",p" << (i + 1) << (i + 1);
  out << ",diverged\n";
  for (std::size_t k = 0; k < estimates.size(); ++k) {
    const auto& belief = estimates[k].posterior;
    out << (k + 1);
    for (int i = 0; i < n; ++i) out << ',' << belief.mean(i);
    for (int i = 0; i < n; ++i) out << ',' << belief.covariance(i, i);
    out << ',' << (estimates[k].diverged ? 1 : 0) << '\n';
  }
  out.precision(precision);
}

}  // namespace guf
