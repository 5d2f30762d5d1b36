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

// T_X(Y): the Frechet derivative of the matrix logarithm at X in direction Y,
//
//   T_X(Y) = d/dr log(X + rY) |_{r=0} = int_0^inf (X+tau)^{-1} Y (X+tau)^{-1} dtau.
//
// Three independent evaluations are provided: the divided-difference closed
// form in the eigenbasis of X (production path), the half-line quadrature of
// the resolvent sandwich, and a central finite difference of log.

#pragma once

#include <cmath>
#include <optional>
#include <string_view>

#include "mtrace/core_linalg.hpp"
#include "mtrace/quadrature.hpp"
#include "mtrace/trial_report.hpp"

namespace mtrace {

enum class TMethod { ClosedForm, HalfLineQuadrature, FiniteDifference };

constexpr std::string_view to_string(TMethod m) {
  switch (m) {
    case TMethod::ClosedForm: return "closed_form";
    case TMethod::HalfLineQuadrature: return "half_line_quadrature";
    case TMethod::FiniteDifference: return "finite_difference";
  }
  return "unknown";
}

struct TOperatorResult {
  ComplexMatrix value;
  TMethod method = TMethod::ClosedForm;
};

/// (log a - log b) / (a - b), with limit 1/a at a = b.
///
/// Close arguments go through 2 atanh((a-b)/(a+b)) / (a-b), which has no
/// cancellation; for |a-b| > (a+b)/2 the plain quotient is already accurate.
inline double log_divided_difference(double a, double b) {
  if (a == b) return 1.0 / a;
  const double diff = a - b;
  const double sum = a + b;
  if (std::abs(diff) <= 0.5 * sum) return 2.0 * std::atanh(diff / sum) / diff;
  return (std::log(a) - std::log(b)) / diff;
}

namespace detail {

inline void require_same_dim(const PosDefMatrix& x, const ComplexMatrix& y) {
  if (y.rows() != x.dim() || y.cols() != x.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "T_X(Y) needs X and Y of equal dimension");
  }
}

}  // namespace detail

inline TOperatorResult t_closed_form(const PosDefMatrix& x, const ComplexMatrix& y) {
  detail::require_same_dim(x, y);
  const auto& s = x.spectral();
  const ComplexMatrix& u = s.eigenvectors;
  ComplexMatrix rotated = u.adjoint() * y * u;
  for (Index j = 0; j < rotated.cols(); ++j) {
    for (Index i = 0; i < rotated.rows(); ++i) {
      rotated(i, j) *= log_divided_difference(s.eigenvalues(i), s.eigenvalues(j));
    }
  }
  return {u * rotated * u.adjoint(), TMethod::ClosedForm};
}

/// Resolvents come from LU solves, not from the eigendecomposition of X.
inline TOperatorResult t_quadrature(const PosDefMatrix& x, const ComplexMatrix& y, const QuadratureRule& rule) {
  detail::require_same_dim(x, y);
  const ComplexMatrix& xm = x.matrix();
  const ComplexMatrix id = identity(x.dim());
  auto sandwich = [&](double tau) -> ComplexMatrix {
    const ComplexMatrix resolvent = (xm + tau * id).partialPivLu().inverse();
    return resolvent * y * resolvent;
  };
  return {integrate_halfline(sandwich, rule), TMethod::HalfLineQuadrature};
}

inline TOperatorResult t_quadrature(const PosDefMatrix& x, const ComplexMatrix& y, const QuadratureConfig& cfg = {}) {
  return t_quadrature(x, y, half_line_rule(cfg));
}

/// 1e-4 * lambda_min(X) / ||Y||_2, i.e. a relative perturbation of 1e-4.
inline double default_fd_step(const PosDefMatrix& x, const ComplexMatrix& y) {
  const double ynorm = SpectralDecomposition::of_hermitian(y).eigenvalues.cwiseAbs().maxCoeff();
  return ynorm > 0.0 ? 1e-4 * x.min_eigenvalue() / ynorm : 1e-4;
}

/// Central difference (log(X+rY) - log(X-rY)) / 2r; Y must be Hermitian.
inline TOperatorResult t_finite_difference(const PosDefMatrix& x, const ComplexMatrix& y,
                                           std::optional<double> step = std::nullopt) {
  detail::require_same_dim(x, y);
  const double r = step.value_or(default_fd_step(x, y));
  if (!(r > 0.0)) throw Error(ErrorCode::StepTooLarge, "finite-difference step must be positive");
  auto shifted_log = [&](double h) {
    try {
      return matrix_log(PosDefMatrix(x.matrix() + h * y));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NonPositiveEigenvalue) throw;
      throw Error(ErrorCode::StepTooLarge, "X +/- rY is not positive definite for r = " + std::to_string(r));
    }
  };
  return {(shifted_log(r) - shifted_log(-r)) / (2.0 * r), TMethod::FiniteDifference};
}

/// int A2^{(1+it)/2} A1 A2^{(1-it)/2} beta(t) dt against T_{A2^{-1}}(A1),
/// reported as Frobenius norms with the relative Frobenius gap.
inline TrialReport sbt_lemma_check(const PosDefMatrix& a1, const PosDefMatrix& a2, const QuadratureRule& rule,
                                   Tolerance tol = {0.0, 1e-8}, std::uint64_t seed = 0) {
  if (a1.dim() != a2.dim()) throw Error(ErrorCode::DimensionMismatch, "sbt lemma needs equal dimensions");
  auto integrand = [&](double t) -> ComplexMatrix {
    const Complex z = half_power(t);
    return matrix_power(a2, z) * a1.matrix() * matrix_power(a2, std::conj(z));
  };
  const ComplexMatrix lhs = integrate_beta(integrand, rule);
  const ComplexMatrix rhs = t_closed_form(a2.inverse(), a1.matrix()).value;
  return identity_report("sbt_lemma", lhs.norm(), rhs.norm(), (lhs - rhs).norm(), tol, seed)
      .with("d", a1.dim());
}

}  // namespace mtrace
