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

#include "numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace guf {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::ZeroTailMass: return "ZeroTailMass";
    case ErrorCode::NonConvergent: return "NonConvergent";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::OrderViolation: return "OrderViolation";
    case ErrorCode::NegativeStretchRadius: return "NegativeStretchRadius";
    case ErrorCode::ScaleDegenerate: return "ScaleDegenerate";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::OriginSingular: return "OriginSingular";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Vector LowerTriangularFactor::solve_lower(const Vector& b) const {
  return lower.triangularView<Eigen::Lower>().solve(b);
}

Vector LowerTriangularFactor::solve(const Vector& b) const {
  const Vector y = solve_lower(b);
  return lower.transpose().triangularView<Eigen::Upper>().solve(y);
}

Matrix LowerTriangularFactor::solve_right(const Matrix& b) const {
  // X (L L^T) = B  <=>  (L L^T) X^T = B^T
  Matrix xt = lower.triangularView<Eigen::Lower>().solve(b.transpose());
  lower.transpose().triangularView<Eigen::Upper>().solveInPlace(xt);
  return xt.transpose();
}

namespace {

bool try_factor(const Matrix& p, Matrix& out) {
  Eigen::LLT<Matrix> llt(p);
  if (llt.info() != Eigen::Success) return false;
  out = llt.matrixL();
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    if (!(out(i, i) > 0.0) || !std::isfinite(out(i, i))) return false;
  }
  return true;
}

}  // namespace

LowerTriangularFactor cholesky(const Matrix& p) {
  if (p.rows() != p.cols() || p.rows() == 0) {
    throw Error(ErrorCode::InvalidArgument, "cholesky: matrix must be square and nonempty");
  }
  if (!p.allFinite()) {
    throw Error(ErrorCode::NotPositiveDefinite, "cholesky: matrix has non-finite entries");
  }
  const Eigen::Index n = p.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double scale = std::max({1.0, std::abs(p(i, j)), std::abs(p(j, i))});
      if (std::abs(p(i, j) - p(j, i)) > 1e-12 * scale) {
        throw Error(ErrorCode::InvalidArgument, "cholesky: matrix is not symmetric");
      }
    }
  }

  LowerTriangularFactor result;
  if (try_factor(p, result.lower)) return result;

  const double trace = p.trace();
  if (trace > 0.0) {
    Matrix repaired = p;
    repaired.diagonal().array() += 1e-9 * trace / static_cast<double>(n);
    if (try_factor(repaired, result.lower)) {
      result.jittered = true;
      return result;
    }
  }
  throw Error(ErrorCode::NotPositiveDefinite, "cholesky: matrix is not positive definite");
}

Matrix psd_factor(const Matrix& cov) {
  if (cov.rows() != cov.cols()) {
    throw Error(ErrorCode::InvalidArgument, "psd_factor: matrix must be square");
  }
  if (cov.isZero(0.0)) return Matrix::Zero(cov.rows(), cov.cols());
  Eigen::LDLT<Matrix> ldlt(cov);
  if (ldlt.info() != Eigen::Success || (ldlt.vectorD().array() < -1e-12 * cov.norm()).any()) {
    throw Error(ErrorCode::NotPositiveDefinite, "psd_factor: matrix is not positive semidefinite");
  }
  const Vector d = ldlt.vectorD().cwiseMax(0.0).cwiseSqrt();
  Matrix l = ldlt.matrixL();
  Matrix factor = ldlt.transpositionsP().transpose() * (l * d.asDiagonal());
  return factor;
}

double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0)) throw Error(ErrorCode::InvalidArgument, "regularized_gamma_q: a must be positive");
  if (x <= 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;

  constexpr double kEps = 1e-16;
  constexpr int kMaxIter = 10000;
  const double log_prefactor = -x + a * std::log(x) - std::lgamma(a);

  if (x < a + 1.0) {
    // Series for the lower function P, Q = 1 - P.
    double ap = a;
    double term = 1.0 / a;
    double sum = term;
    for (int i = 0; i < kMaxIter; ++i) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (std::abs(term) < std::abs(sum) * kEps) break;
    }
    return std::clamp(1.0 - sum * std::exp(log_prefactor), 0.0, 1.0);
  }

  // Continued fraction for Q (modified Lentz).
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return std::clamp(std::exp(log_prefactor) * h, 0.0, 1.0);
}

double chi_square_survival(int n, double r) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "chi_square_survival: dimension must be >= 1");
  if (!(r >= 0.0)) throw Error(ErrorCode::InvalidArgument, "chi_square_survival: r must be >= 0");
  return regularized_gamma_q(0.5 * n, 0.5 * r);
}

double chi_square_upper_quantile(int n, double d) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "chi_square_upper_quantile: dimension must be >= 1");
  if (!(d >= 0.0 && d <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "chi_square_upper_quantile: d must lie in [0, 1]");
  }
  if (d == 0.0) throw Error(ErrorCode::ZeroTailMass, "chi_square_upper_quantile: d = 0 has infinite radius");
  if (d == 1.0) return 0.0;

  constexpr double kTolerance = 1e-12;
  constexpr int kMaxIterations = 200;
  constexpr int kMaxGrowth = 64;

  double lo = 0.0;
  double hi = std::max(1.0, static_cast<double>(n));
  int growth = 0;
  while (chi_square_survival(n, hi) >= d) {
    lo = hi;
    hi *= 2.0;
    if (++growth > kMaxGrowth) {
      throw Error(ErrorCode::NonConvergent, "chi_square_upper_quantile: bracket growth exceeded");
    }
  }

  for (int i = 0; i < kMaxIterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= kTolerance || mid <= lo || mid >= hi) return mid;
    if (chi_square_survival(n, mid) >= d) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (hi - lo <= kTolerance) return 0.5 * (lo + hi);
  throw Error(ErrorCode::NonConvergent, "chi_square_upper_quantile: bisection did not converge");
}

namespace {

std::seed_seq make_seed_seq(std::uint64_t seed, std::uint64_t stream) {
  return std::seed_seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                       static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                       0x9e3779b9u};
}

}  // namespace

RandomSource::RandomSource(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {
  auto seq = make_seed_seq(seed, stream);
  engine_.seed(seq);
}

double RandomSource::uniform() {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  double u = 0.0;
  do {
    u = dist(engine_);
  } while (u <= 0.0 || u >= 1.0);
  return u;
}

double RandomSource::normal() { return normal_(engine_); }

Vector RandomSource::normal_vector(int n) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = normal();
  return v;
}

}  // namespace guf
