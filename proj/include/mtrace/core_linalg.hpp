// Copyright 2026 The mtrace Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Dense complex matrices and Hermitian spectral calculus.
//
// Every matrix function in the library is evaluated through a Hermitian
// eigendecomposition, f(A) = U diag(f(lambda)) U^*. Multi-factor Kronecker
// products use the flattening in which the leftmost factor varies slowest;
// all other headers rely on that convention.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mtrace/error.hpp"

namespace mtrace {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Asymmetry (relative Frobenius) tolerated and silently symmetrized.
inline constexpr double kHermitianTolerance = 1e-8;
/// Reject min(lambda) <= floor * max(lambda).
inline constexpr double kPositivityFloor = 1e-12;
/// Upper bound on any tensor-product dimension built by the library.
inline constexpr Index kMaxTotalDimension = 512;

inline ComplexMatrix hermitize(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "hermitize needs a square matrix");
  }
  return (a + a.adjoint()) * 0.5;
}

/// ||A - A^*||_F / ||A||_F, or the absolute residual when A = 0.
inline double hermiticity_residual(const ComplexMatrix& a) {
  const double num = (a - a.adjoint()).norm();
  const double den = a.norm();
  return den > 0.0 ? num / den : num;
}

inline ComplexMatrix identity(Index dim) { return ComplexMatrix::Identity(dim, dim); }

inline Complex trace(const ComplexMatrix& a) { return a.trace(); }

struct SpectralDecomposition {
  RealVector eigenvalues;     // ascending
  ComplexMatrix eigenvectors; // unitary, columns are eigenvectors

  /// Decomposes a Hermitian matrix (the input is hermitized first).
  static SpectralDecomposition of_hermitian(const ComplexMatrix& h) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitize(h));
    if (solver.info() != Eigen::Success) {
      throw Error(ErrorCode::NonPositiveEigenvalue, "eigensolver did not converge");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
  }

  Index dim() const { return eigenvalues.size(); }

  /// U diag(f(lambda)) U^*; f may return real or complex values.
  template <class F>
  ComplexMatrix apply(F&& f) const {
    ComplexVector values(dim());
    for (Index i = 0; i < dim(); ++i) values(i) = Complex(f(eigenvalues(i)));
    return eigenvectors * values.asDiagonal() * eigenvectors.adjoint();
  }

  ComplexMatrix reconstruct() const {
    return apply([](double x) { return x; });
  }
};

/// f(H) for a Hermitian, not necessarily positive, matrix H.
template <class F>
ComplexMatrix hermitian_fn(const ComplexMatrix& h, F&& f) {
  return SpectralDecomposition::of_hermitian(h).apply(std::forward<F>(f));
}

inline ComplexMatrix hermitian_exp(const ComplexMatrix& h) {
  return hermitian_fn(h, [](double x) { return std::exp(x); });
}

/// A Hermitian positive definite matrix together with its eigendecomposition.
///
/// The decomposition is computed once at construction, so instances are
/// immutable and can be shared between threads.
class PosDefMatrix {
 public:
  explicit PosDefMatrix(const ComplexMatrix& a) {
    if (a.rows() != a.cols() || a.rows() == 0) {
      throw Error(ErrorCode::DimensionMismatch, "positive definite matrix must be square and non-empty");
    }
    if (!a.allFinite()) {
      throw Error(ErrorCode::NonPositiveEigenvalue, "matrix has non-finite entries");
    }
    const double residual = hermiticity_residual(a);
    if (residual > kHermitianTolerance) {
      throw Error(ErrorCode::NotHermitian, "relative asymmetry " + std::to_string(residual));
    }
    matrix_ = hermitize(a);
    spectral_ = SpectralDecomposition::of_hermitian(matrix_);
    check_positive();
  }

  /// Builds from a known decomposition; eigenvectors must be unitary.
  static PosDefMatrix from_spectral(SpectralDecomposition s) {
    PosDefMatrix out;
    out.matrix_ = hermitize(s.reconstruct());
    out.spectral_ = std::move(s);
    out.check_positive();
    return out;
  }

  const ComplexMatrix& matrix() const { return matrix_; }
  const SpectralDecomposition& spectral() const { return spectral_; }
  Index dim() const { return matrix_.rows(); }
  double min_eigenvalue() const { return spectral_.eigenvalues(0); }
  double max_eigenvalue() const { return spectral_.eigenvalues(dim() - 1); }

  PosDefMatrix inverse() const {
    SpectralDecomposition s;
    s.eigenvalues = spectral_.eigenvalues.reverse().cwiseInverse();
    s.eigenvectors = spectral_.eigenvectors.rowwise().reverse();
    return from_spectral(std::move(s));
  }

  /// Entrywise complex conjugate (equal to the transpose).
  PosDefMatrix conjugate() const {
    return from_spectral({spectral_.eigenvalues, spectral_.eigenvectors.conjugate()});
  }

  PosDefMatrix scaled(double c) const {
    if (!(c > 0.0)) throw Error(ErrorCode::InvalidRange, "scale factor must be positive");
    return from_spectral({spectral_.eigenvalues * c, spectral_.eigenvectors});
  }

 private:
  PosDefMatrix() = default;

  void check_positive() const {
    const double lo = spectral_.eigenvalues.minCoeff();
    const double hi = spectral_.eigenvalues.maxCoeff();
    if (!(hi > 0.0) || lo <= kPositivityFloor * hi) {
      throw Error(ErrorCode::NonPositiveEigenvalue,
                  "min eigenvalue " + std::to_string(lo) + " below positivity floor");
    }
  }

  ComplexMatrix matrix_;
  SpectralDecomposition spectral_;
};

template <class F>
ComplexMatrix matrix_fn(const PosDefMatrix& a, F&& f) {
  return a.spectral().apply(std::forward<F>(f));
}

inline ComplexMatrix matrix_log(const PosDefMatrix& a) {
  return matrix_fn(a, [](double x) { return std::log(x); });
}

inline ComplexMatrix matrix_exp(const PosDefMatrix& a) {
  return matrix_fn(a, [](double x) { return std::exp(x); });
}

inline ComplexMatrix matrix_sqrt(const PosDefMatrix& a) {
  return matrix_fn(a, [](double x) { return std::sqrt(x); });
}

/// A^z with lambda^z := exp(z log lambda).
inline ComplexMatrix matrix_power(const PosDefMatrix& a, Complex z) {
  return matrix_fn(a, [z](double x) { return std::exp(z * std::log(x)); });
}

/// The exponent (1 + i t) / 2 used by the complex-power sandwiches.
inline Complex half_power(double t) { return {0.5, 0.5 * t}; }

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// Kronecker product of all factors, leftmost factor slowest.
inline ComplexMatrix kron_all(std::span<const ComplexMatrix> factors) {
  ComplexMatrix out = ComplexMatrix::Ones(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

/// max |conj(A^{(1+it)/2}) - conj(A)^{(1-it)/2}| over entries.
inline double conj_power_residual(const PosDefMatrix& a, double t) {
  const ComplexMatrix lhs = matrix_power(a, half_power(t)).conjugate();
  const ComplexMatrix rhs = matrix_power(a.conjugate(), std::conj(half_power(t)));
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

struct LambdaRange {
  double min = 0.1;
  double max = 10.0;
};

namespace detail {

inline void validate(const LambdaRange& range) {
  if (!(range.min > 0.0) || !(range.max >= range.min) || !std::isfinite(range.max)) {
    throw Error(ErrorCode::InvalidRange, "need 0 < lambda_min <= lambda_max");
  }
}

/// Unitary from the QR factorization of a complex Gaussian matrix, with the
/// phases of R's diagonal folded back so the result is Haar distributed.
inline ComplexMatrix random_unitary(Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  ComplexMatrix g(dim, dim);
  for (Index j = 0; j < dim; ++j)
    for (Index i = 0; i < dim; ++i) g(i, j) = Complex(normal(rng), normal(rng));
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < dim; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

inline RealVector log_uniform(Index dim, const LambdaRange& range, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uniform(std::log(range.min), std::log(range.max));
  RealVector lambda(dim);
  for (Index i = 0; i < dim; ++i) lambda(i) = std::exp(uniform(rng));
  return lambda;
}

}  // namespace detail

/// Q diag(lambda) Q^* with Haar Q and log-uniform lambda; deterministic per seed.
inline PosDefMatrix random_posdef(Index dim, std::uint64_t seed, LambdaRange range = {}) {
  detail::validate(range);
  std::mt19937_64 rng(seed);
  const ComplexMatrix q = detail::random_unitary(dim, rng);
  const RealVector lambda = detail::log_uniform(dim, range, rng);
  return PosDefMatrix(q * lambda.cast<Complex>().asDiagonal() * q.adjoint());
}

/// `count` positive definite matrices sharing one eigenbasis.
inline std::vector<PosDefMatrix> random_commuting_family(Index dim, std::size_t count,
                                                         std::uint64_t seed, LambdaRange range = {}) {
  detail::validate(range);
  std::mt19937_64 rng(seed);
  const ComplexMatrix q = detail::random_unitary(dim, rng);
  std::vector<PosDefMatrix> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const RealVector lambda = detail::log_uniform(dim, range, rng);
    out.emplace_back(q * lambda.cast<Complex>().asDiagonal() * q.adjoint());
  }
  return out;
}

/// Random Hermitian matrix (GUE-like) scaled to operator norm `norm`.
inline ComplexMatrix random_hermitian(Index dim, std::uint64_t seed, double norm = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  ComplexMatrix g(dim, dim);
  for (Index j = 0; j < dim; ++j)
    for (Index i = 0; i < dim; ++i) g(i, j) = Complex(normal(rng), normal(rng));
  ComplexMatrix h = hermitize(g);
  const auto s = SpectralDecomposition::of_hermitian(h);
  const double op = s.eigenvalues.cwiseAbs().maxCoeff();
  return op > 0.0 ? ComplexMatrix(h * (norm / op)) : h;
}

/// Random unit vector in C^dim.
inline ComplexVector random_unit_vector(Index dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  ComplexVector v(dim);
  for (Index i = 0; i < dim; ++i) v(i) = Complex(normal(rng), normal(rng));
  return v / v.norm();
}

}  // namespace mtrace
