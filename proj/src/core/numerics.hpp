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
#include <random>

#include <Eigen/Dense>

#include "errors.hpp"

namespace guf {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Lower-triangular L with L * L^T equal to the source covariance.
struct LowerTriangularFactor {
  Matrix lower;
  /// True when the first factorization failed and the diagonal jitter was
  /// needed.
  bool jittered = false;

  int dimension() const { return static_cast<int>(lower.rows()); }

  /// Solves L * y = b.
  Vector solve_lower(const Vector& b) const;
  /// Solves (L * L^T) * x = b.
  Vector solve(const Vector& b) const;
  /// Solves X * (L * L^T) = B for X, i.e. returns B * (L L^T)^{-1}.
  Matrix solve_right(const Matrix& b) const;
};

/// Cholesky factorization of a symmetric positive definite matrix.
///
/// If the plain factorization fails, 1e-9 * trace(P) / n is added to the
/// diagonal and the factorization is retried once. A second failure throws
/// ErrorCode::NotPositiveDefinite. Non-symmetric input throws
/// ErrorCode::InvalidArgument.
LowerTriangularFactor cholesky(const Matrix& p);

/// Factor F with F * F^T = cov for a positive semidefinite matrix. Used for
/// drawing noise where a zero covariance is legitimate.
Matrix psd_factor(const Matrix& cov);

/// Regularized upper incomplete gamma function Q(a, x).
double regularized_gamma_q(double a, double x);

/// P(||y||^2 >= r) for a standard n-dimensional Gaussian y.
double chi_square_survival(int n, double r);

/// Inverse of chi_square_survival in r. d == 1 gives 0; d == 0 throws
/// ErrorCode::ZeroTailMass.
double chi_square_upper_quantile(int n, double d);

/// Reproducible random stream keyed by (seed, stream id).
class RandomSource {
 public:
  RandomSource(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  /// Uniform on the open interval (0, 1).
  double uniform();
  double normal();
  Vector normal_vector(int n);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace guf
