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

#pragma once

// Independent reference computations for the test suites. Nothing here calls
// the eigendecomposition-based matrix functions under test.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace mtrace::oracle {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

// Values computed offline with mpmath / scipy.integrate.quad on the fixed
// family below; see fixed_family().
namespace frozen {
inline constexpr double kBetaAtZero = std::numbers::pi / 4.0;
inline constexpr double kBetaAtOne = 0.12474604157311241;
inline constexpr double kTOffDiagonal = 0.58197670686932645;  // 1/(e-1)
inline constexpr double kLhs2 = 3.9516600621853231;
inline constexpr double kGt = 4.0;
inline constexpr double kLhs3 = 6.5745793512219368;
inline constexpr double kLieb3 = 7.0;
inline constexpr double kLhs4 = 7.9063132753601533;
inline constexpr double kSbt4 = 9.1585542467974435;
inline constexpr double kLhs5 = 7.0379519545475056;
inline constexpr double kMain5 = 7.442956762786249;
}  // namespace frozen

inline std::vector<Matrix> fixed_family() {
  const Complex i(0.0, 1.0);
  Matrix a1(2, 2), a2(2, 2), a3(2, 2), a4(2, 2), a5(2, 2);
  a1 << 2.0, 1.0, 1.0, 2.0;
  a2 << 1.0, 0.5 * i, -0.5 * i, 1.0;
  a3 << 3.0, 0.0, 0.0, 0.5;
  a4 << 1.5, -0.3, -0.3, 0.7;
  a5 << 0.8, Complex(0.2, 0.1), Complex(0.2, -0.1), 1.2;
  return {a1, a2, a3, a4, a5};
}

/// Loop-based Kronecker product.
inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

/// Taylor series with scaling and squaring.
inline Matrix expm(const Matrix& a) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  const int squarings = std::max(0, static_cast<int>(std::ceil(std::log2(std::max(norm, 1e-300)))) + 4);
  const Matrix scaled = a / std::ldexp(1.0, squarings);
  Matrix term = Matrix::Identity(a.rows(), a.cols());
  Matrix sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * scaled / static_cast<double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

/// Exact Tr exp(A - tP) for 2x2 Hermitian A and P = I - v v^*, from the
/// characteristic polynomial. The root nearer zero comes from det / lambda_-
/// to avoid cancellation at large t.
inline double stahl_trace_2x2(const Matrix& a, const Eigen::VectorXcd& v, double t) {
  const Matrix m = a - t * (Matrix::Identity(2, 2) - v * v.adjoint());
  const double half_tr = 0.5 * (m(0, 0).real() + m(1, 1).real());
  const double det = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)).real();
  const double disc = std::sqrt(half_tr * half_tr - det);
  const double lower = half_tr - disc;
  return std::exp(det / lower) + std::exp(lower);
}

/// sum_i prod_k lambda_{k,i}: every trace form of a commuting family.
inline double diagonal_product_trace(const std::vector<std::vector<double>>& spectra) {
  double sum = 0.0;
  for (std::size_t i = 0; i < spectra.front().size(); ++i) {
    double p = 1.0;
    for (const auto& s : spectra) p *= s[i];
    sum += p;
  }
  return sum;
}

inline double log_divided_difference(double x, double y) {
  return x == y ? 1.0 / x : (std::log(y) - std::log(x)) / (y - x);
}

/// Binary-digit parity: the Thue-Morse word indexed from zero.
inline int thue_morse_parity(unsigned j) { return __builtin_popcount(j) & 1; }

}  // namespace mtrace::oracle
