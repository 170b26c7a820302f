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

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "sigma_set.hpp"
#include "sphere_designs.hpp"

namespace guf {

enum class LevelMode {
  /// d_k = k / (N + 1)
  Grid,
  /// d_k = k / N, so the last level sits on the mean (r = 0).
  GridClosed,
  /// Sorted uniform draws, duplicates redrawn.
  Random,
};

enum class Allocation {
  /// Same design size on every level.
  Equal,
  /// Design size proportional to exp(-r_k / 2).
  DensityProportional,
};

/// (x - mean)^T P^{-1} (x - mean) through the Cholesky factor.
double mahalanobis(const GaussianBelief& belief, const Vector& x);

/// chi_square_survival(n, mahalanobis(belief, x)); equals 1 at the mean.
double importance_value(const GaussianBelief& belief, const Vector& x);

/// Importance carried by the shell {d1 <= i(x) <= d2}. Throws
/// ErrorCode::OrderViolation when d1 > d2.
double region_importance(double d1, double d2);

/// N strictly increasing importance values. Random mode requires `rng`.
/// The radii are left at zero; see resolve_radii.
std::vector<ImportanceLevel> importance_levels(int count, LevelMode mode, RandomSource* rng = nullptr);

/// Fills r_k = chi_square_upper_quantile(n, d_k).
std::vector<ImportanceLevel> resolve_radii(std::vector<ImportanceLevel> levels, int n);

/// Picks one design per level from `catalogue`. Equal uses the largest
/// catalogue entry on every level. DensityProportional scales the largest
/// entry's size by exp(-r_k/2) / max_m exp(-r_m/2) and takes the entry whose
/// size is closest to that target (ties go to the smaller entry).
std::vector<ReferenceSampling> allocate_designs(std::span<const ImportanceLevel> levels,
                                                std::span<const ReferenceSampling> catalogue,
                                                Allocation policy);

/// Per-level weight exp(-r_k/2) / sum_m N_m exp(-r_m/2), N_m the design size.
std::vector<double> level_weights(std::span<const ImportanceLevel> levels,
                                  std::span<const ReferenceSampling> designs);

/// Moment-matched, positively weighted sigma set. Points are
/// mean + sqrt(r_k + beta) * L * s for every s in designs[k], with beta solving
/// the covariance match. Throws ErrorCode::NegativeStretchRadius if any
/// r_k + beta < 0 and ErrorCode::NotPositiveDefinite from the factorization.
SigmaSet build_sigma_set(const GaussianBelief& belief, std::span<const ImportanceLevel> levels,
                         std::span<const ReferenceSampling> designs);

/// Pre-stretch samples mean + sqrt(r_k) * L * s, carrying the density value
/// lambda * exp(-r_k / 2) as weight (not normalized).
SigmaSet basic_points(const GaussianBelief& belief, std::span<const ImportanceLevel> levels,
                      std::span<const ReferenceSampling> designs);

/// sum_j w_j f(X_j)
Vector approximate_expectation(const SigmaSet& set, const std::function<Vector(const Vector&)>& f);

/// Writes `level,d,r,weight,x1..xn` rows with a header line.
void write_sigma_set_rows(std::ostream& out, const SigmaSet& set);

}  // namespace guf
