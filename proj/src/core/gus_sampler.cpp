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

#include "gus_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <set>

namespace guf {

void GaussianBelief::validate() const {
  if (mean.size() == 0) throw Error(ErrorCode::InvalidArgument, "belief: empty mean");
  if (covariance.rows() != mean.size() || covariance.cols() != mean.size()) {
    throw Error(ErrorCode::ShapeMismatch, "belief: covariance dimension does not match mean");
  }
  if (!mean.allFinite()) throw Error(ErrorCode::InvalidArgument, "belief: non-finite mean");
}

double GaussianBelief::normalizer() const {
  const auto factor = cholesky(covariance);
  const double log_det = 2.0 * factor.lower.diagonal().array().log().sum();
  return std::exp(-0.5 * dimension() * std::log(2.0 * std::numbers::pi) - 0.5 * log_det);
}

Matrix SigmaSet::weighted_covariance(const Vector& center) const {
  const Matrix centered = points.colwise() - center;
  return centered * weights.asDiagonal() * centered.transpose();
}

double mahalanobis(const GaussianBelief& belief, const Vector& x) {
  if (x.size() != belief.mean.size()) throw Error(ErrorCode::ShapeMismatch, "mahalanobis: dimension mismatch");
  const auto factor = cholesky(belief.covariance);
  return factor.solve_lower(x - belief.mean).squaredNorm();
}

double importance_value(const GaussianBelief& belief, const Vector& x) {
  return chi_square_survival(belief.dimension(), mahalanobis(belief, x));
}

double region_importance(double d1, double d2) {
  if (!(d1 >= 0.0 && d2 <= 1.0)) throw Error(ErrorCode::InvalidArgument, "region_importance: values must lie in [0, 1]");
  if (d1 > d2) throw Error(ErrorCode::OrderViolation, "region_importance: d1 must not exceed d2");
  return d2 - d1;
}

std::vector<ImportanceLevel> importance_levels(int count, LevelMode mode, RandomSource* rng) {
  if (count < 1) throw Error(ErrorCode::InvalidArgument, "importance_levels: count must be >= 1");
  std::vector<ImportanceLevel> levels(static_cast<std::size_t>(count));
  switch (mode) {
    case LevelMode::Grid:
      for (int k = 0; k < count; ++k) levels[static_cast<std::size_t>(k)].d = (k + 1.0) / (count + 1.0);
      break;
    case LevelMode::GridClosed:
      for (int k = 0; k < count; ++k) levels[static_cast<std::size_t>(k)].d = (k + 1.0) / count;
      break;
    case LevelMode::Random: {
      if (rng == nullptr) throw Error(ErrorCode::InvalidArgument, "importance_levels: random mode needs a source");
      std::set<double> draws;
      while (static_cast<int>(draws.size()) < count) draws.insert(rng->uniform());
      std::size_t k = 0;
      for (double d : draws) levels[k++].d = d;
      break;
    }
  }
  return levels;
}

std::vector<ImportanceLevel> resolve_radii(std::vector<ImportanceLevel> levels, int n) {
  for (auto& level : levels) {
    if (!(level.d > 0.0 && level.d <= 1.0)) {
      throw Error(ErrorCode::InvalidArgument, "resolve_radii: importance values must lie in (0, 1]");
    }
    level.r = chi_square_upper_quantile(n, level.d);
  }
  return levels;
}

std::vector<ReferenceSampling> allocate_designs(std::span<const ImportanceLevel> levels,
                                                std::span<const ReferenceSampling> catalogue,
                                                Allocation policy) {
  if (catalogue.empty()) throw Error(ErrorCode::InvalidArgument, "allocate_designs: empty catalogue");
  if (levels.empty()) throw Error(ErrorCode::InvalidArgument, "allocate_designs: no levels");
  const auto largest = std::max_element(catalogue.begin(), catalogue.end(),
                                        [](const auto& a, const auto& b) { return a.size() < b.size(); });
  if (policy == Allocation::Equal) return std::vector<ReferenceSampling>(levels.size(), *largest);

  const double r_min =
      std::min_element(levels.begin(), levels.end(), [](const auto& a, const auto& b) { return a.r < b.r; })->r;
  std::vector<ReferenceSampling> designs;
  designs.reserve(levels.size());
  for (const auto& level : levels) {
    const double target = static_cast<double>(largest->size()) * std::exp(-0.5 * (level.r - r_min));
    const ReferenceSampling* best = nullptr;
    double best_gap = 0.0;
    for (const auto& candidate : catalogue) {
      const double gap = std::abs(static_cast<double>(candidate.size()) - target);
      if (best == nullptr || gap < best_gap - 1e-9 || (std::abs(gap - best_gap) <= 1e-9 && candidate.size() < best->size())) {
        best = &candidate;
        best_gap = gap;
      }
    }
    designs.push_back(*best);
  }
  return designs;
}

namespace {

void check_configuration(const GaussianBelief& belief, std::span<const ImportanceLevel> levels,
                         std::span<const ReferenceSampling> designs) {
  belief.validate();
  if (levels.empty()) throw Error(ErrorCode::InvalidArgument, "GUS: at least one level is required");
  if (levels.size() != designs.size()) throw Error(ErrorCode::ShapeMismatch, "GUS: need exactly one design per level");
  for (const auto& design : designs) {
    if (design.dimension() != belief.dimension()) {
      throw Error(ErrorCode::ShapeMismatch, "GUS: design dimension does not match the belief");
    }
  }
  for (const auto& level : levels) {
    if (!(level.r >= 0.0) || !std::isfinite(level.r)) {
      throw Error(ErrorCode::InvalidArgument, "GUS: levels must have resolved radii");
    }
  }
}

}  // namespace

std::vector<double> level_weights(std::span<const ImportanceLevel> levels,
                                  std::span<const ReferenceSampling> designs) {
  // exp(-r/2) relative to the smallest radius keeps the ratios exact and
  // avoids underflow for far shells.
  double r_min = levels.front().r;
  for (const auto& level : levels) r_min = std::min(r_min, level.r);
  std::vector<double> weights(levels.size());
  double denominator = 0.0;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    weights[k] = std::exp(-0.5 * (levels[k].r - r_min));
    denominator += static_cast<double>(designs[k].size()) * weights[k];
  }
  for (double& w : weights) w /= denominator;
  return weights;
}

SigmaSet build_sigma_set(const GaussianBelief& belief, std::span<const ImportanceLevel> levels,
                         std::span<const ReferenceSampling> designs) {
  check_configuration(belief, levels, designs);
  const auto factor = cholesky(belief.covariance);
  const std::vector<double> w = level_weights(levels, designs);

  // Covariance match: sum_k w_k (r_k + beta) c_k = 1.
  double weighted_rc = 0.0;
  double weighted_c = 0.0;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    weighted_rc += w[k] * levels[k].r * designs[k].c_value();
    weighted_c += w[k] * designs[k].c_value();
  }
  const double beta = (1.0 - weighted_rc) / weighted_c;

  Eigen::Index total = 0;
  for (const auto& design : designs) total += design.size();

  SigmaSet set;
  set.stretch = beta;
  set.levels.assign(levels.begin(), levels.end());
  set.points.resize(belief.dimension(), total);
  set.weights.resize(total);
  set.level.reserve(static_cast<std::size_t>(total));

  Eigen::Index offset = 0;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const double radius_sq = levels[k].r + beta;
    if (radius_sq < 0.0) {
      throw Error(ErrorCode::NegativeStretchRadius,
                  "GUS: r_k + beta is negative for level " + std::to_string(k + 1) + " (beta = " +
                      std::to_string(beta) + ")");
    }
    const Eigen::Index count = designs[k].size();
    set.points.middleCols(offset, count) =
        (std::sqrt(radius_sq) * (factor.lower * designs[k].points())).colwise() + belief.mean;
    set.weights.segment(offset, count).setConstant(w[k]);
    set.level.insert(set.level.end(), static_cast<std::size_t>(count), static_cast<int>(k));
    offset += count;
  }
  return set;
}

SigmaSet basic_points(const GaussianBelief& belief, std::span<const ImportanceLevel> levels,
                      std::span<const ReferenceSampling> designs) {
  check_configuration(belief, levels, designs);
  const auto factor = cholesky(belief.covariance);
  const double lambda = belief.normalizer();

  Eigen::Index total = 0;
  for (const auto& design : designs) total += design.size();

  SigmaSet set;
  set.levels.assign(levels.begin(), levels.end());
  set.points.resize(belief.dimension(), total);
  set.weights.resize(total);
  Eigen::Index offset = 0;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const Eigen::Index count = designs[k].size();
    set.points.middleCols(offset, count) =
        (std::sqrt(levels[k].r) * (factor.lower * designs[k].points())).colwise() + belief.mean;
    set.weights.segment(offset, count).setConstant(lambda * std::exp(-0.5 * levels[k].r));
    set.level.insert(set.level.end(), static_cast<std::size_t>(count), static_cast<int>(k));
    offset += count;
  }
  return set;
}

Vector approximate_expectation(const SigmaSet& set, const std::function<Vector(const Vector&)>& f) {
  if (set.size() == 0) throw Error(ErrorCode::InvalidArgument, "approximate_expectation: empty set");
  Vector sum = set.weights(0) * f(set.points.col(0));
  for (Eigen::Index j = 1; j < set.size(); ++j) sum += set.weights(j) * f(set.points.col(j));
  return sum;
}

void write_sigma_set_rows(std::ostream& out, const SigmaSet& set) {
  const auto precision = out.precision(15);
  out << "level,d,r,weight";
  for (int i = 0; i < set.dimension(); ++i) out << ",x" << (i + 1);
  out << '\n';
  for (Eigen::Index j = 0; j < set.size(); ++j) {
    const int k = set.level.empty() ? 0 : set.level[static_cast<std::size_t>(j)];
    out << (k + 1) << ',';
    if (static_cast<std::size_t>(k) < set.levels.size()) {
      out << set.levels[static_cast<std::size_t>(k)].d << ',' << set.levels[static_cast<std::size_t>(k)].r;
    } else {
      out << ',';
    }
    out << ',' << set.weights(j);
    for (int i = 0; i < set.dimension(); ++i) out << ',' << set.points(i, j);
    out << '\n';
  }
  out.precision(precision);
}

}  // namespace guf
