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
#include <span>
#include <vector>

#include "numerics.hpp"

namespace guf {

/// Canonical representative of an orbit under coordinate permutations and
/// sign changes: nonnegative, nonincreasing, unit Euclidean norm.
struct Generator {
  std::vector<double> coords;
  /// Run lengths a_1..a_M of equal coordinates (the zero run included).
  std::vector<int> multiplicities;
  /// t_i = a_1 + ... + a_i, one-based.
  std::vector<int> boundaries;
  /// Count of strictly positive coordinates.
  int nonzero = 0;

  int dimension() const { return static_cast<int>(coords.size()); }
};

/// Absolute values sorted nonincreasing and renormalized to unit length.
/// Coordinates within 1e-12 (relative) of each other are merged into one run
/// and made bitwise identical. Throws ErrorCode::ZeroVector.
Generator canonicalize(std::span<const double> v);

/// 2^N(x) * n! / prod a_j!
std::uint64_t orbit_size(const Generator& g);

/// Every distinct image of g under permutations and sign changes, each
/// generated exactly once. Columns of the returned n x orbit_size matrix.
Matrix expand_orbit(const Generator& g);

/// Closed-form H_n with sum_{y in orbit} y y^T = H_n * I.
double h_coefficient(const Generator& g);

/// Brute-force sum of y y^T over the columns of `points`.
Matrix sum_outer_products(const Matrix& points);

/// Images of x under sign changes only (zero coordinates are not flipped).
Matrix sign_change_orbit(std::span<const double> x);

struct SeparationReport {
  /// Nearest-neighbor distance of each point.
  std::vector<double> per_point;
  double minimum = 0.0;
  double maximum = 0.0;

  bool uniform(double tolerance = 1e-12) const { return maximum - minimum <= tolerance; }
};

/// Nearest-neighbor distances among the columns of `points` (at least 2).
SeparationReport min_separation(const Matrix& points);

/// A union of orbit-disjoint generator orbits on the unit sphere.
class ReferenceSampling {
 public:
  /// Throws ErrorCode::InvalidArgument for an empty basis, mixed dimensions
  /// or two generators sharing an orbit.
  explicit ReferenceSampling(std::vector<Generator> basis);

  int dimension() const { return dimension_; }
  const std::vector<Generator>& basis() const { return basis_; }
  /// n x size() matrix of unit vectors.
  const Matrix& points() const { return points_; }
  Eigen::Index size() const { return points_.cols(); }
  /// Sum of h_coefficient over the basis.
  double c_value() const { return c_value_; }

 private:
  int dimension_ = 0;
  std::vector<Generator> basis_;
  Matrix points_;
  double c_value_ = 0.0;
};

/// Generator (1, ..., 1, 0, ..., 0) / sqrt(ones) in dimension n.
Generator ones_generator(int n, int ones);

/// Cumulative union of the orbits of ones_generator(n, 1..order). Order 1 is
/// the axis design (2n points); in n = 5 the sizes run 10, 50, 130, 210.
ReferenceSampling scenario_design(int n, int order);

}  // namespace guf
