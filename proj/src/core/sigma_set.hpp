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

#include <vector>

#include "numerics.hpp"

namespace guf {

/// Mean and SPD covariance of a Gaussian state estimate.
struct GaussianBelief {
  Vector mean;
  Matrix covariance;

  int dimension() const { return static_cast<int>(mean.size()); }

  /// Throws ErrorCode::ShapeMismatch or ErrorCode::InvalidArgument.
  void validate() const;

  /// Density normalizer (2 pi)^{-n/2} |P|^{-1/2}.
  double normalizer() const;
};

/// One importance level: value d in (0, 1] and squared Mahalanobis radius r
/// with chi_square_survival(n, r) == d.
struct ImportanceLevel {
  double d = 1.0;
  double r = 0.0;
};

/// Weighted deterministic point set. Points are the columns of `points`.
struct SigmaSet {
  Matrix points;
  Vector weights;
  /// Importance-level index per point; all zero for rules without levels.
  std::vector<int> level;
  /// Uniform stretch beta (GUS only).
  double stretch = 0.0;
  std::vector<ImportanceLevel> levels;

  Eigen::Index size() const { return points.cols(); }
  int dimension() const { return static_cast<int>(points.rows()); }
  bool has_negative_weights() const { return (weights.array() < 0.0).any(); }
  Vector weighted_mean() const { return points * weights; }
  Matrix weighted_covariance(const Vector& center) const;
};

}  // namespace guf
