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

// Left- and right-hand sides of the Golden-Thompson, Lieb, n-matrix
// complex-power and resolvent/tensor-product trace inequalities, plus
// verdict-producing checks for the identities that connect them.
//
// Matrix lists are ordered A_1, ..., A_n (index 0 holds A_1).

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mtrace/combinatorics.hpp"
#include "mtrace/core_linalg.hpp"
#include "mtrace/entangle.hpp"
#include "mtrace/frechet.hpp"
#include "mtrace/quadrature.hpp"
#include "mtrace/trial_report.hpp"

namespace mtrace {

using MatrixList = std::span<const PosDefMatrix>;

/// lhs <= rhs + 1e-9 + 1e-8 |rhs|.
inline constexpr Tolerance kInequalityTolerance{1e-9, 1e-8};

namespace detail {

inline void require_family(MatrixList a, std::size_t min_count) {
  if (a.size() < min_count) {
    throw Error(ErrorCode::DimensionMismatch, "need at least " + std::to_string(min_count) + " matrices");
  }
  for (const auto& m : a) {
    if (m.dim() != a[0].dim()) throw Error(ErrorCode::DimensionMismatch, "matrices differ in dimension");
  }
}

/// Real part of a trace whose imaginary part must be round-off.
inline double real_trace(Complex value, double rel_limit, double abs_floor = 1.0) {
  if (std::abs(value.imag()) > rel_limit * std::max(abs_floor, std::abs(value.real()))) {
    throw Error(ErrorCode::ImaginaryResidue, "imaginary part " + std::to_string(value.imag()) + " of a real trace");
  }
  return value.real();
}

inline ComplexMatrix sum_of_logs(MatrixList a) {
  ComplexMatrix sum = ComplexMatrix::Zero(a[0].dim(), a[0].dim());
  for (const auto& m : a) sum += matrix_log(m);
  return sum;
}

}  // namespace detail

/// Tr exp(sum_k log A_k).
inline double lhs_exp_sum_log(MatrixList a) {
  detail::require_family(a, 1);
  return detail::real_trace(hermitian_exp(detail::sum_of_logs(a)).trace(), 1e-10, 0.0);
}

/// Tr[A1 A2].
inline double rhs_gt(const PosDefMatrix& a1, const PosDefMatrix& a2) {
  const std::array<PosDefMatrix, 2> pair{a1, a2};
  detail::require_family(pair, 2);
  return detail::real_trace((a1.matrix() * a2.matrix()).trace(), 1e-10);
}

/// Tr[A3 T_{A2^{-1}}(A1)].
inline double rhs_lieb3(const PosDefMatrix& a1, const PosDefMatrix& a2, const PosDefMatrix& a3) {
  const std::array<PosDefMatrix, 3> triple{a1, a2, a3};
  detail::require_family(triple, 3);
  const ComplexMatrix t = t_closed_form(a2.inverse(), a1.matrix()).value;
  return detail::real_trace((a3.matrix() * t).trace(), 1e-10);
}

/// Tr[A_n A_{n-1}^z ... A_2^z A_1 A_2^{z*} ... A_{n-1}^{z*}] with z = (1+it)/2.
inline Complex sbt_integrand(MatrixList a, double t) {
  const Complex z = half_power(t);
  ComplexMatrix inner = a.front().matrix();
  for (std::size_t k = 1; k + 1 < a.size(); ++k) {
    inner = matrix_power(a[k], z) * inner * matrix_power(a[k], std::conj(z));
  }
  return (a.back().matrix() * inner).trace();
}

/// Beta-average of the complex-power trace over t.
inline double rhs_sbt(MatrixList a, const QuadratureRule& rule) {
  detail::require_family(a, 3);
  const Complex value = integrate_beta([&](double t) { return sbt_integrand(a, t); }, rule);
  return detail::real_trace(value, 1e-8);
}

/// Tr[ P_{2^{n'-1}} T_{cal A}(cal B) ] with
///   cal A = (x)_{k=2}^{n-1} C^{a_k} A_k^{-1} C^{a_k} (x) I^{(x)rho},
///   cal B = A_1 (x) conj(A_n) (x) (x)_{j=0}^{n'-2} P_{2^j}.
inline double rhs_main(MatrixList a) {
  detail::require_family(a, 3);
  const int n = static_cast<int>(a.size());
  const FactorLayout layout = build_layout(n, a[0].dim());
  const PosDefMatrix left(assemble_left(layout, [&](int k) { return a[k - 1].inverse().matrix(); }));
  const ComplexMatrix right = assemble_right(layout, a.front().matrix(), a.back().matrix());
  const ComplexMatrix t = t_closed_form(left, right).value;
  return detail::real_trace(outer_projector_trace(layout, t), 1e-10);
}

/// The family X with X_1 = A_1, X_n = A_n and X_k = A_{pi^{-1}(k)}; the
/// complex-power form evaluated on X equals rhs_main evaluated on A.
inline std::vector<PosDefMatrix> reorder_for_tensor_form(MatrixList a, const MidPermutation& pi) {
  std::vector<PosDefMatrix> x(a.begin(), a.end());
  const MidPermutation inv = pi.inverse();
  for (int k = 2; k + 1 <= static_cast<int>(a.size()); ++k) x[k - 1] = a[inv(k) - 1];
  return x;
}

inline std::vector<PosDefMatrix> reorder_for_tensor_form(MatrixList a) {
  return reorder_for_tensor_form(a, build_permutation(static_cast<int>(a.size())));
}

/// Both sides of the pointwise-in-t identity between the complex-power trace
/// of X_1..X_n and its tensor form with X_{pi(k)} in slot k. lhs and rhs hold
/// moduli; real and imaginary parts go into params.
inline TrialReport key_lemma_check(MatrixList x, double t, const MidPermutation& pi,
                                   Tolerance tol = {0.0, 1e-9}, std::uint64_t seed = 0) {
  detail::require_family(x, 3);
  const int n = static_cast<int>(x.size());
  if (pi.n != n) throw Error(ErrorCode::DimensionMismatch, "permutation built for a different n");
  const Complex lhs = sbt_integrand(x, t);

  const FactorLayout layout = build_layout(n, x[0].dim());
  const PosDefMatrix left(assemble_left(layout, [&](int k) { return x[pi(k) - 1].matrix(); }));
  const ComplexMatrix right = assemble_right(layout, x.front().matrix(), x.back().matrix());
  const Complex z = half_power(t);
  const ComplexMatrix sandwich = matrix_power(left, z) * right * matrix_power(left, std::conj(z));
  const Complex rhs = outer_projector_trace(layout, sandwich);

  return identity_report("key_lemma", std::abs(lhs), std::abs(rhs), std::abs(lhs - rhs), tol, seed)
      .with("n", n)
      .with("d", x[0].dim())
      .with("t", t)
      .with("lhs_re", lhs.real())
      .with("lhs_im", lhs.imag())
      .with("rhs_re", rhs.real())
      .with("rhs_im", rhs.imag());
}

/// d exp(Tr[sum_k log A_k] / d), the dimension-normalized lower bound.
inline double jensen_lower_bound(MatrixList a) {
  detail::require_family(a, 1);
  const double d = static_cast<double>(a[0].dim());
  return d * std::exp(detail::real_trace(detail::sum_of_logs(a).trace(), 1e-10) / d);
}

/// d exp(Tr[sum log A_k]/d) <= rhs_main for four matrices.
inline TrialReport prop13_check(MatrixList a, Tolerance tol = kInequalityTolerance, std::uint64_t seed = 0) {
  if (a.size() != 4) throw Error(ErrorCode::DimensionMismatch, "the four-matrix bound needs exactly four matrices");
  return inequality_report("four_matrix_bound", jensen_lower_bound(a), rhs_main(a), tol, seed).with("d", a[0].dim());
}

/// d exp(Tr M / d) <= Tr exp M for M = sum log A_k.
inline TrialReport jensen_check(MatrixList a, Tolerance tol = kInequalityTolerance, std::uint64_t seed = 0) {
  return inequality_report("jensen", jensen_lower_bound(a), lhs_exp_sum_log(a), tol, seed)
      .with("n", a.size())
      .with("d", a[0].dim());
}

/// The four expressions of the commutator rewriting, R = (A2^{-1} + tau)^{-1}:
///   [0] A1 A2 - int A2^{(1+it)/2} A1 A2^{(1-it)/2} beta(t) dt
///   [1] int (A1 R^2 - R A1 R) dtau
///   [2] int [A1, R] R dtau
///   [3] int R A2^{-1} [A1, A2] A2^{-1} R^2 dtau
inline std::array<ComplexMatrix, 4> commutator_chain(const PosDefMatrix& a1, const PosDefMatrix& a2,
                                                     const QuadratureRule& beta, const QuadratureRule& half_line) {
  if (a1.dim() != a2.dim()) throw Error(ErrorCode::DimensionMismatch, "commutator chain needs equal dimensions");
  const ComplexMatrix& x = a1.matrix();
  const ComplexMatrix& y = a2.matrix();
  const ComplexMatrix y_inv = a2.inverse().matrix();
  const ComplexMatrix comm = x * y - y * x;
  auto resolvent = [&](double tau) {
    return a2.spectral().apply([tau](double lambda) { return lambda / (1.0 + lambda * tau); });
  };

  const ComplexMatrix averaged = integrate_beta(
      [&](double t) -> ComplexMatrix {
        const Complex z = half_power(t);
        return matrix_power(a2, z) * x * matrix_power(a2, std::conj(z));
      },
      beta);
  std::array<ComplexMatrix, 4> out;
  out[0] = x * y - averaged;
  out[1] = integrate_halfline(
      [&](double tau) -> ComplexMatrix {
        const ComplexMatrix r = resolvent(tau);
        return x * r * r - r * x * r;
      },
      half_line);
  out[2] = integrate_halfline(
      [&](double tau) -> ComplexMatrix {
        const ComplexMatrix r = resolvent(tau);
        return (x * r - r * x) * r;
      },
      half_line);
  out[3] = integrate_halfline(
      [&](double tau) -> ComplexMatrix {
        const ComplexMatrix r = resolvent(tau);
        return r * y_inv * comm * y_inv * r * r;
      },
      half_line);
  return out;
}

/// Max pairwise Frobenius gap of the four chain expressions, normalized by
/// ||A1||_F ||A2||_F. lhs/rhs hold the norms of the first and last expression.
inline TrialReport commutator_chain_check(const PosDefMatrix& a1, const PosDefMatrix& a2, const QuadratureRule& beta,
                                          const QuadratureRule& half_line, double rtol = 1e-6,
                                          std::uint64_t seed = 0) {
  const auto chain = commutator_chain(a1, a2, beta, half_line);
  double gap = 0.0;
  for (std::size_t i = 0; i < chain.size(); ++i)
    for (std::size_t j = i + 1; j < chain.size(); ++j) gap = std::max(gap, (chain[i] - chain[j]).norm());
  const double scale = a1.matrix().norm() * a2.matrix().norm();
  TrialReport r = identity_report("commutator_chain", chain[0].norm(), chain[3].norm(), gap, {rtol * scale, 0.0}, seed);
  r.rel_gap = gap / scale;
  r.with("d", a1.dim()).with("commutator_norm", (a1.matrix() * a2.matrix() - a2.matrix() * a1.matrix()).norm());
  return r;
}

struct StahlCriteria {
  double final_atol = 1e-6;             // gap at the largest t
  bool require_decreasing = true;       // gaps strictly decrease along the grid
  std::optional<double> max_ratio;      // gap(t_last) <= max_ratio * gap(t_first)
};

/// |Tr exp(A - tP) - exp<v, A v>| for P = I - v v^*.
inline double stahl_gap(const ComplexMatrix& a, const ComplexVector& v, double t) {
  const ComplexMatrix p = identity(a.rows()) - v * v.adjoint();
  const double limit = std::exp((v.adjoint() * a * v)(0, 0).real());
  const double value = hermitian_exp(a - t * p).trace().real();
  return std::abs(value - limit);
}

inline TrialReport stahl_limit_check(const ComplexMatrix& a, const ComplexVector& v, std::span<const double> t_grid,
                                     const StahlCriteria& criteria = {}, std::uint64_t seed = 0) {
  if (a.rows() != a.cols() || v.size() != a.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "Stahl limit needs A square and v of matching length");
  }
  if (t_grid.empty()) throw Error(ErrorCode::ConfigError, "empty t grid");
  if (std::abs(v.norm() - 1.0) > 1e-12) throw Error(ErrorCode::InvalidRange, "v must be a unit vector");
  const ComplexMatrix h = hermitize(a);
  std::vector<double> gaps;
  for (double t : t_grid) gaps.push_back(stahl_gap(h, v, t));

  const double limit = std::exp((v.adjoint() * h * v)(0, 0).real());
  const double t_max = t_grid.back();
  const ComplexMatrix p = identity(h.rows()) - v * v.adjoint();
  const double value = hermitian_exp(h - t_max * p).trace().real();

  bool pass = gaps.back() <= criteria.final_atol;
  if (criteria.require_decreasing) {
    for (std::size_t i = 1; i < gaps.size(); ++i) pass = pass && gaps[i] < gaps[i - 1];
  }
  double ratio = gaps.front() > 0.0 ? gaps.back() / gaps.front() : 0.0;
  if (criteria.max_ratio) pass = pass && (gaps.back() <= *criteria.max_ratio * gaps.front());

  TrialReport r = identity_report("stahl_limit", value, limit, gaps.back(), {criteria.final_atol, 0.0}, seed);
  r.pass = pass;
  r.with("d", h.rows()).with("t_max", t_max).with("ratio_last_first", ratio);
  for (std::size_t i = 0; i < gaps.size(); ++i) r.with("gap_t" + std::to_string(i), gaps[i]);
  return r;
}

struct DerivativeFormResult {
  double target = 0.0;          // rhs_main
  double step = 0.0;            // r
  double derivative = 0.0;      // central difference at r
  double derivative_half = 0.0; // central difference at r/2
  double mismatch = 0.0;
  double mismatch_half = 0.0;
};

/// r -> Tr[P_{2^{n'-1}} exp(-log cal A + log(cal A + r cal B))] differentiated at
/// r = 0 by central differences at r and r/2, with r = rel_step *
/// lambda_min(cal A) / ||cal B||_2.
inline DerivativeFormResult derivative_form(MatrixList a, double rel_step = 1e-3) {
  detail::require_family(a, 3);
  const int n = static_cast<int>(a.size());
  const FactorLayout layout = build_layout(n, a[0].dim());
  const PosDefMatrix left(assemble_left(layout, [&](int k) { return a[k - 1].inverse().matrix(); }));
  const ComplexMatrix right = assemble_right(layout, a.front().matrix(), a.back().matrix());
  const ComplexMatrix log_left = matrix_log(left);
  const double right_norm = SpectralDecomposition::of_hermitian(right).eigenvalues.cwiseAbs().maxCoeff();

  auto value_at = [&](double r) {
    ComplexMatrix shifted_log;
    try {
      shifted_log = matrix_log(PosDefMatrix(left.matrix() + r * right));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NonPositiveEigenvalue) throw;
      throw Error(ErrorCode::StepTooLarge, "cal A + r cal B not positive definite at r = " + std::to_string(r));
    }
    return outer_projector_trace(layout, hermitian_exp(shifted_log - log_left)).real();
  };
  auto central = [&](double r) { return (value_at(r) - value_at(-r)) / (2.0 * r); };

  DerivativeFormResult out;
  out.target = rhs_main(a);
  out.step = rel_step * left.min_eigenvalue() / right_norm;
  out.derivative = central(out.step);
  out.derivative_half = central(0.5 * out.step);
  out.mismatch = std::abs(out.derivative - out.target);
  out.mismatch_half = std::abs(out.derivative_half - out.target);
  return out;
}

/// Passes when the derivative at `match_step` is within rtol |rhs_main| and
/// halving `convergence_step` divides the mismatch by 4 (within [3, 5]). The
/// convergence test uses a coarser step so that truncation error dominates
/// round-off; when it is already at round-off level the ratio is not required.
inline TrialReport remark_vi_check(MatrixList a, double match_step = 1e-3, double convergence_step = 2e-2,
                                   double rtol = 1e-5, std::uint64_t seed = 0) {
  const DerivativeFormResult fine = derivative_form(a, match_step);
  const DerivativeFormResult coarse = derivative_form(a, convergence_step);
  const double scale = std::abs(fine.target);
  const bool roundoff_level = coarse.mismatch <= 1e-12 * scale;
  const double ratio = coarse.mismatch_half > 0.0 ? coarse.mismatch / coarse.mismatch_half : 0.0;
  const bool second_order = roundoff_level || (ratio >= 3.0 && ratio <= 5.0);

  TrialReport r = identity_report("derivative_form", fine.derivative, fine.target, fine.mismatch, {0.0, rtol}, seed);
  r.pass = r.pass && second_order;
  r.with("n", a.size())
      .with("d", a[0].dim())
      .with("step", fine.step)
      .with("coarse_step", coarse.step)
      .with("convergence_ratio", ratio);
  return r;
}

}  // namespace mtrace
