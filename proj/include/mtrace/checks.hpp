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

// Registry of named verification checks run by campaigns.
//
// A check expands into a parameter grid (matrix count n, evaluation point t,
// or a label); each (grid point, trial) pair yields exactly one TrialReport.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mtrace/combinatorics.hpp"
#include "mtrace/core_linalg.hpp"
#include "mtrace/entangle.hpp"
#include "mtrace/frechet.hpp"
#include "mtrace/inequalities.hpp"
#include "mtrace/quadrature.hpp"
#include "mtrace/trial_report.hpp"

namespace mtrace {

/// splitmix64 finalizer; used to derive independent per-trial seeds.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t hash_id(std::string_view id) {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (unsigned char c : id) h = (h ^ c) * 1099511628211ULL;
  return h;
}

struct GridPoint {
  int n = 0;
  double t = 0.0;
  std::string label;
};

/// Everything a single trial needs; immutable and shared between workers.
struct CheckContext {
  Index d = 2;
  LambdaRange lambda;
  QuadratureConfig quad;
  QuadratureRule beta;
  QuadratureRule half_line;
  std::vector<double> stahl_t_grid{1e2, 1e4, 1e7};

  std::vector<PosDefMatrix> family(std::size_t count, std::uint64_t seed, Index dim = 0) const {
    std::vector<PosDefMatrix> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
      out.push_back(random_posdef(dim > 0 ? dim : d, mix_seed(seed, k), lambda));
    }
    return out;
  }
};

enum class Suite { Identities, Inequalities };

struct CheckSpec {
  std::string id;
  Suite suite = Suite::Identities;
  std::string title;
  std::string formula;
  Tolerance tolerance;
  bool uses_n = false;  // grid over the campaign's n values
  int min_n = 3;
  std::function<std::vector<GridPoint>(const std::vector<int>& n_values)> grid;
  std::function<TrialReport(const CheckContext&, const GridPoint&, Tolerance, std::uint64_t seed)> run;
};

namespace detail {

inline std::vector<GridPoint> single_point(const std::vector<int>&) { return {GridPoint{}}; }

inline std::vector<GridPoint> n_grid(const std::vector<int>& n_values, int min_n, int max_n = 1 << 20) {
  std::vector<GridPoint> out;
  for (int n : n_values) {
    if (n >= min_n && n <= max_n) out.push_back({n, 0.0, ""});
  }
  return out;
}

inline constexpr std::array<double, 5> kLemmaTimes{0.0, 0.5, -0.5, 2.0, -2.0};

}  // namespace detail

inline const std::vector<CheckSpec>& check_registry() {
  static const std::vector<CheckSpec> registry = [] {
    std::vector<CheckSpec> r;

    r.push_back({"beta_normalization", Suite::Identities, "beta is a probability density",
                 "int beta(t) dt = 1,  beta(t) = (pi/2) / (1 + cosh(pi t))", {1e-10, 0.0}, false, 0,
                 detail::single_point,
                 [](const CheckContext& c, const GridPoint&, Tolerance tol, std::uint64_t seed) {
                   const double mass = integrate_beta([](double) { return 1.0; }, c.beta);
                   return identity_report("beta_normalization", mass, 1.0, tol, seed)
                       .with("tail_bound", beta_tail_bound(1.0, c.beta.truncation));
                 }});

    r.push_back({"scalar_sbt_grid", Suite::Identities, "scalar complex-power average vs. log divided difference",
                 "(xy)^{-1/2} int (y/x)^{it/2} beta(t) dt = (log y - log x) / (y - x)  (= 1/x at x = y)",
                 {1e-8, 0.0}, false, 0, detail::single_point,
                 [](const CheckContext& c, const GridPoint&, Tolerance tol, std::uint64_t seed) {
                   constexpr std::array<double, 5> grid{0.1, 0.5, 1.0, 2.0, 10.0};
                   double worst = -1.0, worst_lhs = 0.0, worst_rhs = 0.0;
                   for (double x : grid) {
                     for (double y : grid) {
                       const Complex avg = integrate_beta(
                           [&](double t) { return std::exp(Complex(0.0, 0.5 * t * std::log(y / x))) / std::sqrt(x * y); },
                           c.beta);
                       const double exact = x == y ? 1.0 / x : (std::log(y) - std::log(x)) / (y - x);
                       const double err = std::abs(avg - exact);
                       if (err > worst) worst = err, worst_lhs = avg.real(), worst_rhs = exact;
                     }
                   }
                   return identity_report("scalar_sbt_grid", worst_lhs, worst_rhs, worst, tol, seed);
                 }});

    r.push_back({"t_operator_triangle", Suite::Identities, "three evaluations of T_X(Y) agree",
                 "T_X(Y) = d/dr log(X + rY)|_0 = int_0^inf (X+tau)^-1 Y (X+tau)^-1 dtau = divided differences",
                 {0.0, 1e-6}, false, 0, detail::single_point,
                 [](const CheckContext& c, const GridPoint&, Tolerance tol, std::uint64_t seed) {
                   const PosDefMatrix x = random_posdef(c.d, mix_seed(seed, 0), c.lambda);
                   const ComplexMatrix y = random_hermitian(c.d, mix_seed(seed, 1));
                   const ComplexMatrix closed = t_closed_form(x, y).value;
                   const ComplexMatrix quad = t_quadrature(x, y, c.half_line).value;
                   const ComplexMatrix fd = t_finite_difference(x, y).value;
                   const double gap = std::max({(closed - quad).norm(), (closed - fd).norm(), (quad - fd).norm()});
                   return identity_report("t_operator_triangle", closed.norm(), fd.norm(), gap, tol, seed)
                       .with("d", c.d)
                       .with("quadrature_gap", (closed - quad).norm())
                       .with("finite_difference_gap", (closed - fd).norm());
                 }});

    r.push_back({"pairing_identity", Suite::Identities, "maximally entangled pairing",
                 "Tr[XY] = Tr[P_m (X (x) Y^T)] = Tr[P_m (X (x) conj Y)]", {1e-12, 0.0}, false, 0,
                 [](const std::vector<int>&) {
                   return std::vector<GridPoint>{{0, 0.0, "d=2,m=1"}, {0, 0.0, "d=3,m=1"}, {0, 0.0, "d=2,m=2"}};
                 },
                 [](const CheckContext&, const GridPoint& g, Tolerance tol, std::uint64_t seed) {
                   const Index d = g.label == "d=3,m=1" ? 3 : 2;
                   const int m = g.label == "d=2,m=2" ? 2 : 1;
                   const Index dim = m == 2 ? d * d : d;
                   const ComplexMatrix x = random_hermitian(dim, mix_seed(seed, 0), 3.0);
                   const ComplexMatrix y = random_hermitian(dim, mix_seed(seed, 1), 3.0);
                   return pairing_identity_check(x, y, d, m, tol.atol, seed);
                 }});

    r.push_back({"sbt_lemma", Suite::Identities, "complex-power average equals T",
                 "int A2^{(1+it)/2} A1 A2^{(1-it)/2} beta(t) dt = T_{A2^-1}(A1)", {0.0, 1e-8}, false, 0,
                 detail::single_point,
                 [](const CheckContext& c, const GridPoint&, Tolerance tol, std::uint64_t seed) {
                   const auto a = c.family(2, seed);
                   return sbt_lemma_check(a[0], a[1], c.beta, tol, seed);
                 }});

    r.push_back({"key_lemma", Suite::Identities, "pointwise tensor-product form of the complex-power trace",
                 "Tr[X_n X_{n-1}^z .. X_1 .. X_{n-1}^z*] = Tr[P_{2^{n'-1}} (L^z (x) I) (X_1 (x) conj X_n (x) P..) "
                 "(L^z* (x) I)],  L = (x)_k C^{a_k} X_{pi(k)} C^{a_k}",
                 {0.0, 1e-9}, true, 3,
                 [](const std::vector<int>& ns) {
                   std::vector<GridPoint> out;
                   for (const auto& p : detail::n_grid(ns, 3))
                     for (double t : detail::kLemmaTimes) out.push_back({p.n, t, ""});
                   return out;
                 },
                 [](const CheckContext& c, const GridPoint& g, Tolerance tol, std::uint64_t seed) {
                   const auto x = c.family(static_cast<std::size_t>(g.n), seed);
                   return key_lemma_check(x, g.t, build_permutation(g.n), tol, seed);
                 }});

    r.push_back({"sbt_main_identity", Suite::Identities, "complex-power and resolvent right-hand sides agree",
                 "int Tr[X_n .. X_1 ..] beta dt (X_k = A_{pi^-1(k)}) = Tr[P_{2^{n'-1}} T_{cal A}(cal B)]",
                 {0.0, 1e-7}, true, 3, [](const std::vector<int>& ns) { return detail::n_grid(ns, 3); },
                 [](const CheckContext& c, const GridPoint& g, Tolerance tol, std::uint64_t seed) {
                   const auto a = c.family(static_cast<std::size_t>(g.n), seed);
                   const double sbt = rhs_sbt(reorder_for_tensor_form(a), c.beta);
                   return identity_report("sbt_main_identity", sbt, rhs_main(a), tol, seed).with("n", g.n).with("d", c.d);
                 }});

    r.push_back({"sbt_lieb3_identity", Suite::Identities, "three-matrix complex-power form equals Lieb's form",
                 "int Tr[A3 A2^{(1+it)/2} A1 A2^{(1-it)/2}] beta(t) dt = Tr[A3 T_{A2^-1}(A1)]", {0.0, 1e-8}, false, 0,
                 detail::single_point,
                 [](const CheckContext& c, const GridPoint&, Tolerance tol, std::uint64_t seed) {
                   const auto a = c.family(3, seed);
                   return identity_report("sbt_lieb3_identity", rhs_sbt(a, c.beta), rhs_lieb3(a[0], a[1], a[2]), tol,
                                          seed)
                       .with("d", c.d);
                 }});

    r.push_back({"equality_diagonal", Suite::Identities, "equality for simultaneously diagonalizable families",
                 "commuting A_k: Tr exp(sum log A_k) = Tr[A1 A2] = Tr[A3 T_{A2^-1}(A1)] = complex-power average",
                 {0.0, 1e-8}, false, 0,
                 [](const std::vector<int>& ns) {
                   std::vector<GridPoint> out{{2, 0.0, "golden_thompson"}, {3, 0.0, "lieb3"}};
                   for (const auto& p : detail::n_grid(ns, 3)) out.push_back({p.n, 0.0, "sbt"});
                   return out;
                 },
                 [](const CheckContext& c, const GridPoint& g, Tolerance tol, std::uint64_t seed) {
                   const auto a = random_commuting_family(c.d, static_cast<std::size_t>(g.n), seed, c.lambda);
                   const double lhs = lhs_exp_sum_log(a);
                   double rhs = 0.0;
                   if (g.label == "golden_thompson") rhs = rhs_gt(a[0], a[1]);
                   else if (g.label == "lieb3") rhs = rhs_lieb3(a[0], a[1], a[2]);
                   else rhs = rhs_sbt(a, c.beta);
                   return identity_report("equality_diagonal", lhs, rhs, tol, seed)
                       .with("form", g.label)
                       .with("n", g.n)
                       .with("d", c.d);
                 }});

    r.push_back({"commutator_chain", Suite::Identities, "commutator rewriting of A1 A2 minus its complex-power average",
                 "A1A2 - int A2^z A1 A2^z* beta = int (A1 R^2 - R A1 R) = int [A1,R] R = int R A2^-1 [A1,A2] A2^-1 R^2,"
                 "  R = (A2^-1 + tau)^-1",
                 {0.0, 1e-6}, false, 0, detail::single_point,
                 [](const CheckContext& c, const GridPoint&, Tolerance tol, std::uint64_t seed) {
                   const auto a = c.family(2, seed);
                   return commutator_chain_check(a[0], a[1], c.beta, c.half_line, tol.rtol, seed);
                 }});

    r.push_back({"commutator_chain_commuting", Suite::Identities, "commutator chain vanishes for commuting pairs",
                 "[A1, A2] = 0  =>  all four commutator-chain expressions vanish", {0.0, 1e-12}, false, 0,
                 detail::single_point,
                 [](const CheckContext& c, const GridPoint&, Tolerance tol, std::uint64_t seed) {
                   const auto a = random_commuting_family(c.d, 2, seed, c.lambda);
                   const auto chain = commutator_chain(a[0], a[1], c.beta, c.half_line);
                   double worst = 0.0;
                   for (const auto& e : chain) worst = std::max(worst, e.norm());
                   const double scale = a[0].matrix().norm() * a[1].matrix().norm();
                   TrialReport rep =
                       identity_report("commutator_chain_commuting", worst, 0.0, worst, {tol.rtol * scale, 0.0}, seed);
                   rep.rel_gap = worst / scale;
                   return rep.with("d", c.d);
                 }});

    r.push_back({"stahl_limit", Suite::Identities, "asymptotic Stahl limit",
                 "lim_{t->inf} Tr exp(A - tP) = exp<v, A v>,  ker P = span{v}", {1e-6, 0.0}, false, 0,
                 detail::single_point,
                 [](const CheckContext& c, const GridPoint&, Tolerance tol, std::uint64_t seed) {
                   const ComplexMatrix a = random_hermitian(c.d, mix_seed(seed, 0), 1.0);
                   const ComplexVector v = random_unit_vector(c.d, mix_seed(seed, 1));
                   StahlCriteria crit;
                   crit.final_atol = tol.atol;
                   return stahl_limit_check(a, v, c.stahl_t_grid, crit, seed);
                 }});

    r.push_back({"derivative_form", Suite::Identities, "resolvent right-hand side as a derivative of a trace function",
                 "Tr[P T_{cal A}(cal B)] = d/dr Tr[P exp(-log cal A + log(cal A + r cal B))] at r = 0",
                 {0.0, 1e-5}, false, 0, detail::single_point,
                 [](const CheckContext& c, const GridPoint&, Tolerance tol, std::uint64_t seed) {
                   const auto a = c.family(4, seed);
                   return remark_vi_check(a, 1e-3, 2e-2, tol.rtol, seed);
                 }});

    r.push_back({"golden_thompson", Suite::Inequalities, "Golden-Thompson inequality",
                 "Tr exp(log A1 + log A2) <= Tr[A1 A2]", kInequalityTolerance, false, 0, detail::single_point,
                 [](const CheckContext& c, const GridPoint&, Tolerance tol, std::uint64_t seed) {
                   const auto a = c.family(2, seed);
                   return inequality_report("golden_thompson", lhs_exp_sum_log(a), rhs_gt(a[0], a[1]), tol, seed)
                       .with("d", c.d);
                 }});

    r.push_back({"lieb3", Suite::Inequalities, "Lieb three-matrix inequality",
                 "Tr exp(log A1 + log A2 + log A3) <= Tr[A3 T_{A2^-1}(A1)]", kInequalityTolerance, false, 0,
                 detail::single_point,
                 [](const CheckContext& c, const GridPoint&, Tolerance tol, std::uint64_t seed) {
                   const auto a = c.family(3, seed);
                   return inequality_report("lieb3", lhs_exp_sum_log(a), rhs_lieb3(a[0], a[1], a[2]), tol, seed)
                       .with("d", c.d);
                 }});

    r.push_back({"sbt_inequality", Suite::Inequalities, "n-matrix complex-power trace inequality",
                 "Tr exp(sum log A_k) <= int Tr[A_n A_{n-1}^{(1+it)/2} .. A_1 .. A_{n-1}^{(1-it)/2}] beta(t) dt",
                 kInequalityTolerance, true, 3, [](const std::vector<int>& ns) { return detail::n_grid(ns, 3); },
                 [](const CheckContext& c, const GridPoint& g, Tolerance tol, std::uint64_t seed) {
                   const auto a = c.family(static_cast<std::size_t>(g.n), seed);
                   return inequality_report("sbt_inequality", lhs_exp_sum_log(a), rhs_sbt(a, c.beta), tol, seed)
                       .with("n", g.n)
                       .with("d", c.d);
                 }});

    r.push_back({"main_inequality", Suite::Inequalities, "n-matrix resolvent (tensor-product) trace inequality",
                 "Tr exp(sum log A_k) <= Tr[P_{2^{n'-1}} T_{(x)_k C^{a_k} A_k^-1 C^{a_k} (x) I^rho}"
                 "(A_1 (x) conj A_n (x) (x)_j P_{2^j})]",
                 kInequalityTolerance, true, 3, [](const std::vector<int>& ns) { return detail::n_grid(ns, 3); },
                 [](const CheckContext& c, const GridPoint& g, Tolerance tol, std::uint64_t seed) {
                   const auto a = c.family(static_cast<std::size_t>(g.n), seed);
                   return inequality_report("main_inequality", lhs_exp_sum_log(a), rhs_main(a), tol, seed)
                       .with("n", g.n)
                       .with("d", c.d);
                 }});

    r.push_back({"four_matrix_bound", Suite::Inequalities, "dimension-normalized four-matrix inequality",
                 "d exp(Tr[log A1 + log A2 + log A3 + log A4] / d) <= Tr[P_1 T_{(A2 (x) conj A3)^-1}(A1 (x) conj A4)]",
                 kInequalityTolerance, false, 0, detail::single_point,
                 [](const CheckContext& c, const GridPoint&, Tolerance tol, std::uint64_t seed) {
                   return prop13_check(c.family(4, seed), tol, seed);
                 }});

    r.push_back({"jensen", Suite::Inequalities, "trace Jensen bound",
                 "d exp(Tr M / d) <= Tr exp M,  M = sum log A_k", kInequalityTolerance, true, 2,
                 [](const std::vector<int>& ns) { return detail::n_grid(ns, 2); },
                 [](const CheckContext& c, const GridPoint& g, Tolerance tol, std::uint64_t seed) {
                   return jensen_check(c.family(static_cast<std::size_t>(g.n), seed), tol, seed);
                 }});
    return r;
  }();
  return registry;
}

inline const CheckSpec* find_check(std::string_view id) {
  for (const auto& c : check_registry()) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

inline const CheckSpec& require_check(std::string_view id) {
  const CheckSpec* c = find_check(id);
  if (c == nullptr) throw Error(ErrorCode::UnknownCheck, "no check named '" + std::string(id) + "'");
  return *c;
}

/// Check ids of a suite: "identities", "inequalities" or "all".
inline std::vector<std::string> suite_checks(std::string_view suite) {
  std::vector<std::string> out;
  for (const auto& c : check_registry()) {
    if (suite == "all" || (suite == "identities" && c.suite == Suite::Identities) ||
        (suite == "inequalities" && c.suite == Suite::Inequalities)) {
      out.push_back(c.id);
    }
  }
  if (out.empty()) throw Error(ErrorCode::ConfigError, "unknown suite '" + std::string(suite) + "'");
  return out;
}

}  // namespace mtrace
