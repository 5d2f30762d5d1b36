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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mtrace/frechet.hpp"
#include "oracles.hpp"

namespace mtrace {
namespace {

TEST(LogDividedDifference, MatchesScalarOracleAcrossRegimes) {
  for (double a : {0.1, 0.5, 1.0, 2.0, 10.0})
    for (double b : {0.1, 0.5, 1.0, 2.0, 10.0})
      EXPECT_NEAR(log_divided_difference(a, b), oracle::log_divided_difference(a, b),
                  1e-14 * oracle::log_divided_difference(a, b));
}

TEST(LogDividedDifference, StaysAccurateForNearlyEqualArguments) {
  // 1/a - h/(2a^2) + h^2/(3a^3) for b = a + h
  const double a = 3.0;
  for (double h : {1e-6, 1e-9, 1e-13}) {
    const double expected = 1.0 / a - h / (2 * a * a) + h * h / (3 * a * a * a);
    EXPECT_NEAR(log_divided_difference(a, a + h), expected, 1e-15);
    EXPECT_NEAR(log_divided_difference(a + h, a), expected, 1e-15);
  }
}

TEST(TClosedForm, OffDiagonalEntryOfDiagonalBase) {
  ComplexMatrix x(2, 2), y(2, 2);
  x << 1.0, 0.0, 0.0, std::numbers::e;
  y << 0.0, 1.0, 1.0, 0.0;
  const auto t = t_closed_form(PosDefMatrix(x), y).value;
  EXPECT_NEAR(t(0, 1).real(), oracle::frozen::kTOffDiagonal, 1e-15);
  EXPECT_NEAR(t(1, 0).real(), oracle::frozen::kTOffDiagonal, 1e-15);
  EXPECT_NEAR(std::abs(t(0, 0)), 0.0, 1e-16);
}

TEST(TClosedForm, DirectionAlongBaseGivesIdentity) {
  // T_X(X) = I, T_X(I) = X^{-1}
  const PosDefMatrix x = random_posdef(4, 31);
  EXPECT_LT((t_closed_form(x, x.matrix()).value - identity(4)).norm(), 1e-12);
  EXPECT_LT((t_closed_form(x, identity(4)).value - x.inverse().matrix()).norm(), 1e-12);
}

TEST(TClosedForm, PreservesHermiticityAndTracePairing) {
  // Tr[Z T_X(Y)] = Tr[T_X(Z) Y]
  const PosDefMatrix x = random_posdef(3, 40);
  const ComplexMatrix y = random_hermitian(3, 41);
  const ComplexMatrix z = random_hermitian(3, 42);
  const ComplexMatrix ty = t_closed_form(x, y).value;
  EXPECT_LT(hermiticity_residual(ty), 1e-14);
  EXPECT_NEAR(std::abs((z * ty).trace() - (t_closed_form(x, z).value * y).trace()), 0.0, 1e-12);
}

TEST(TOperator, ThreeMethodsAgree) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const PosDefMatrix x = random_posdef(4, 1000 + seed);
    const ComplexMatrix y = random_hermitian(4, 2000 + seed);
    const auto closed = t_closed_form(x, y);
    const auto quad = t_quadrature(x, y);
    const auto fd = t_finite_difference(x, y);
    EXPECT_EQ(closed.method, TMethod::ClosedForm);
    EXPECT_EQ(quad.method, TMethod::HalfLineQuadrature);
    EXPECT_EQ(fd.method, TMethod::FiniteDifference);
    EXPECT_LT((closed.value - quad.value).norm(), 1e-9 * closed.value.norm());
    EXPECT_LT((closed.value - fd.value).norm(), 1e-7 * closed.value.norm());
  }
}

TEST(TFiniteDifference, StepTooLargeIsReported) {
  const PosDefMatrix x = random_posdef(2, 3);
  const ComplexMatrix y = identity(2);
  try {
    (void)t_finite_difference(x, y, 2.0 * x.min_eigenvalue());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::StepTooLarge);
  }
}

TEST(TOperator, DimensionMismatch) {
  const PosDefMatrix x = random_posdef(2, 3);
  EXPECT_THROW((void)t_closed_form(x, identity(3)), Error);
  EXPECT_THROW((void)t_quadrature(x, identity(3)), Error);
}

TEST(ComplexPowerAverage, ComplexPowerAverageEqualsT) {
  const auto rule = beta_rule();
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const TrialReport r = sbt_lemma_check(random_posdef(3, 50 + seed), random_posdef(3, 80 + seed), rule);
    EXPECT_TRUE(r.pass) << r.rel_gap;
  }
}

TEST(ComplexPowerAverage, ScalarCase) {
  // 1x1: int a2^{1} a1 beta = a1 a2 and T_{1/a2}(a1) = a1 a2
  ComplexMatrix a1(1, 1), a2(1, 1);
  a1 << 3.0;
  a2 << 0.25;
  const TrialReport r = sbt_lemma_check(PosDefMatrix(a1), PosDefMatrix(a2), beta_rule());
  EXPECT_NEAR(r.lhs, 0.75, 1e-12);
  EXPECT_NEAR(r.rhs, 0.75, 1e-15);
}

}  // namespace
}  // namespace mtrace
