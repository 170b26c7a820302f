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

#include "sphere_designs.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace guf {

namespace {

constexpr double kEqualityTolerance = 1e-12;

std::uint64_t binomial(int n, int k) {
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    result = result * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  }
  return result;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

Generator canonicalize(std::span<const double> v) {
  if (v.empty()) throw Error(ErrorCode::InvalidArgument, "canonicalize: empty vector");
  std::vector<double> coords(v.size());
  std::transform(v.begin(), v.end(), coords.begin(), [](double x) { return std::abs(x); });
  const double norm = std::sqrt(std::inner_product(coords.begin(), coords.end(), coords.begin(), 0.0));
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error(ErrorCode::ZeroVector, "canonicalize: vector must be nonzero and finite");
  }
  for (double& x : coords) x /= norm;
  std::sort(coords.begin(), coords.end(), std::greater<>());

  Generator g;
  std::size_t start = 0;
  while (start < coords.size()) {
    std::size_t end = start + 1;
    while (end < coords.size() && coords[start] - coords[end] <= kEqualityTolerance) ++end;
    double value = 0.0;
    for (std::size_t i = start; i < end; ++i) value += coords[i];
    value /= static_cast<double>(end - start);
    if (value <= kEqualityTolerance) value = 0.0;
    std::fill(coords.begin() + static_cast<std::ptrdiff_t>(start),
              coords.begin() + static_cast<std::ptrdiff_t>(end), value);
    g.multiplicities.push_back(static_cast<int>(end - start));
    g.boundaries.push_back(static_cast<int>(end));
    start = end;
  }
  g.nonzero = static_cast<int>(std::count_if(coords.begin(), coords.end(), [](double x) { return x > 0.0; }));
  g.coords = std::move(coords);
  return g;
}

std::uint64_t orbit_size(const Generator& g) {
  // n! / prod a_j! as a product of binomials, then the sign factor.
  std::uint64_t permutations = 1;
  int remaining = g.dimension();
  for (int a : g.multiplicities) {
    permutations *= binomial(remaining, a);
    remaining -= a;
  }
  return permutations << g.nonzero;
}

Matrix expand_orbit(const Generator& g) {
  const int n = g.dimension();
  // Permute run labels rather than doubles so equal coordinates never
  // produce duplicate images.
  std::vector<int> labels;
  std::vector<double> run_values;
  for (std::size_t run = 0; run < g.multiplicities.size(); ++run) {
    const int first = g.boundaries[run] - g.multiplicities[run];
    run_values.push_back(g.coords[static_cast<std::size_t>(first)]);
    labels.insert(labels.end(), static_cast<std::size_t>(g.multiplicities[run]), static_cast<int>(run));
  }

  Matrix points(n, static_cast<Eigen::Index>(orbit_size(g)));
  Eigen::Index column = 0;
  std::vector<int> nonzero_positions;
  do {
    Vector base(n);
    nonzero_positions.clear();
    for (int i = 0; i < n; ++i) {
      base(i) = run_values[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])];
      if (base(i) != 0.0) nonzero_positions.push_back(i);
    }
    const std::uint64_t patterns = std::uint64_t{1} << nonzero_positions.size();
    for (std::uint64_t mask = 0; mask < patterns; ++mask) {
      Vector image = base;
      for (std::size_t b = 0; b < nonzero_positions.size(); ++b) {
        if (mask & (std::uint64_t{1} << b)) image(nonzero_positions[b]) = -image(nonzero_positions[b]);
      }
      points.col(column++) = image;
    }
  } while (std::next_permutation(labels.begin(), labels.end()));
  return points;
}

double h_coefficient(const Generator& g) {
  const int n = g.dimension();
  double denominator = 1.0;
  for (int a : g.multiplicities) denominator *= factorial(a);
  double weighted = 0.0;
  for (std::size_t i = 0; i < g.multiplicities.size(); ++i) {
    const double x = g.coords[static_cast<std::size_t>(g.boundaries[i] - 1)];
    weighted += x * x * g.multiplicities[i];
  }
  return std::ldexp(1.0, g.nonzero) * factorial(n - 1) / denominator * weighted;
}

Matrix sum_outer_products(const Matrix& points) {
  if (points.cols() == 0) throw Error(ErrorCode::InvalidArgument, "sum_outer_products: empty set");
  Matrix sum = Matrix::Zero(points.rows(), points.rows());
  for (Eigen::Index j = 0; j < points.cols(); ++j) sum.noalias() += points.col(j) * points.col(j).transpose();
  return sum;
}

Matrix sign_change_orbit(std::span<const double> x) {
  std::vector<int> nonzero;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] != 0.0) nonzero.push_back(static_cast<int>(i));
  }
  const std::uint64_t patterns = std::uint64_t{1} << nonzero.size();
  Matrix points(static_cast<Eigen::Index>(x.size()), static_cast<Eigen::Index>(patterns));
  for (std::uint64_t mask = 0; mask < patterns; ++mask) {
    for (std::size_t i = 0; i < x.size(); ++i) points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(mask)) = x[i];
    for (std::size_t b = 0; b < nonzero.size(); ++b) {
      if (mask & (std::uint64_t{1} << b)) {
        points(nonzero[b], static_cast<Eigen::Index>(mask)) = -x[static_cast<std::size_t>(nonzero[b])];
      }
    }
  }
  return points;
}

SeparationReport min_separation(const Matrix& points) {
  if (points.cols() < 2) throw Error(ErrorCode::InvalidArgument, "min_separation: need at least two points");
  SeparationReport report;
  report.per_point.assign(static_cast<std::size_t>(points.cols()), std::numeric_limits<double>::infinity());
  for (Eigen::Index i = 0; i < points.cols(); ++i) {
    for (Eigen::Index j = i + 1; j < points.cols(); ++j) {
      const double dist = (points.col(i) - points.col(j)).norm();
      auto& a = report.per_point[static_cast<std::size_t>(i)];
      auto& b = report.per_point[static_cast<std::size_t>(j)];
      a = std::min(a, dist);
      b = std::min(b, dist);
    }
  }
  const auto [lo, hi] = std::minmax_element(report.per_point.begin(), report.per_point.end());
  report.minimum = *lo;
  report.maximum = *hi;
  return report;
}

ReferenceSampling::ReferenceSampling(std::vector<Generator> basis) : basis_(std::move(basis)) {
  if (basis_.empty()) throw Error(ErrorCode::InvalidArgument, "ReferenceSampling: empty basis");
  dimension_ = basis_.front().dimension();
  Eigen::Index total = 0;
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    if (basis_[i].dimension() != dimension_) {
      throw Error(ErrorCode::InvalidArgument, "ReferenceSampling: generators differ in dimension");
    }
    for (std::size_t j = 0; j < i; ++j) {
      bool same = true;
      for (int k = 0; k < dimension_ && same; ++k) {
        same = std::abs(basis_[i].coords[static_cast<std::size_t>(k)] - basis_[j].coords[static_cast<std::size_t>(k)]) <=
               kEqualityTolerance;
      }
      if (same) throw Error(ErrorCode::InvalidArgument, "ReferenceSampling: generators share an orbit");
    }
    total += static_cast<Eigen::Index>(orbit_size(basis_[i]));
    c_value_ += h_coefficient(basis_[i]);
  }
  points_.resize(dimension_, total);
  Eigen::Index offset = 0;
  for (const auto& g : basis_) {
    const Matrix orbit = expand_orbit(g);
    points_.middleCols(offset, orbit.cols()) = orbit;
    offset += orbit.cols();
  }
}

Generator ones_generator(int n, int ones) {
  if (n < 1 || ones < 1 || ones > n) {
    throw Error(ErrorCode::InvalidArgument, "ones_generator: need 1 <= ones <= n");
  }
  std::vector<double> v(static_cast<std::size_t>(n), 0.0);
  std::fill(v.begin(), v.begin() + ones, 1.0);
  return canonicalize(v);
}

ReferenceSampling scenario_design(int n, int order) {
  if (order < 1 || order > n) {
    throw Error(ErrorCode::InvalidArgument, "scenario_design: order must be in [1, n]");
  }
  std::vector<Generator> basis;
  for (int k = 1; k <= order; ++k) basis.push_back(ones_generator(n, k));
  return ReferenceSampling(std::move(basis));
}

}  // namespace guf
