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

#include "mtrace/core_linalg.hpp"
#include "mtrace/quadrature.hpp"
#include "oracles.hpp"

namespace mtrace {
namespace {

TEST(BetaDensity, FrozenValues) {
  EXPECT_NEAR(beta_density(0.0), oracle::frozen::kBetaAtZero, 1e-16);
  EXPECT_NEAR(beta_density(1.0), oracle::frozen::kBetaAtOne, 1e-16);
  EXPECT_DOUBLE_EQ(beta_density(-1.0), beta_density(1.0));
  EXPECT_TRUE(std::isfinite(beta_density(400.0)));
  EXPECT_GE(beta_density(400.0), 0.0);
}

TEST(GaussLegendre, TwoAndThreePointRules) {
  const auto two = gauss_legendre(2);
  EXPECT_NEAR(two.nodes[1], 1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(two.weights[0], 1.0, 1e-15);
  const auto three = gauss_legendre(3);
  EXPECT_NEAR(three.nodes[2], std::sqrt(0.6), 1e-15);
  EXPECT_NEAR(three.weights[1], 8.0 / 9.0, 1e-15);
}

TEST(GaussLegendre, ExactForPolynomialsOfDegree2nMinus1) {
  const auto rule = gauss_legendre(6);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.node_count(); ++i) s += rule.weights[i] * std::pow(rule.nodes[i], 10);
  EXPECT_NEAR(s, 2.0 / 11.0, 1e-15);
}

TEST(BetaRule, NormalizesAndReproducesMoments) {
  const auto rule = beta_rule();
  EXPECT_EQ(rule.node_count(), 400u);
  EXPECT_NEAR(integrate_beta([](double) { return 1.0; }, rule), 1.0, 1e-12);
  EXPECT_NEAR(integrate_beta([](double t) { return t; }, rule), 0.0, 1e-14);
  // second moment of (pi/2)/(1 + cosh pi t) is 1/3
  EXPECT_NEAR(integrate_beta([](double t) { return t * t; }, rule), 1.0 / 3.0, 1e-10);
}

TEST(BetaRule, CharacteristicFunction) {
  // int e^{ist} beta(t) dt = s / sinh(s)
  const auto rule = beta_rule();
  for (double s : {0.3, 1.0, 2.5}) {
    const Complex v = integrate_beta([s](double t) { return std::exp(Complex(0.0, s * t)); }, rule);
    EXPECT_NEAR(v.real(), s / std::sinh(s), 1e-11);
    EXPECT_NEAR(v.imag(), 0.0, 1e-14);
  }
}

TEST(BetaRule, TailBoundIsTinyAtDefaultTruncation) {
  EXPECT_LT(beta_tail_bound(1.0, 12.0), 1e-15);
  EXPECT_GT(beta_tail_bound(1.0, 2.0), 1e-4);
}

TEST(HalfLineRule, IntegratesRationalDecay) {
  const auto rule = half_line_rule(QuadratureConfig{});
  EXPECT_EQ(rule.node_count(), 200u);
  EXPECT_NEAR(integrate_halfline([](double x) { return 1.0 / ((1.0 + x) * (1.0 + x)); }, rule), 1.0, 1e-13);
  // int_0^inf dtau / ((a + tau)(b + tau)) = log(b/a) / (b - a)
  const double a = 0.1, b = 10.0;
  EXPECT_NEAR(integrate_halfline([&](double x) { return 1.0 / ((a + x) * (b + x)); }, rule),
              oracle::log_divided_difference(a, b), 1e-10);
}

TEST(Rules, DomainMismatchIsAConfigError) {
  try {
    (void)integrate_beta([](double) { return 1.0; }, half_line_rule(QuadratureConfig{}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConfigError);
  }
  EXPECT_THROW((void)integrate_halfline([](double) { return 1.0; }, beta_rule()), Error);
}

TEST(Rules, MatrixValuedIntegrand) {
  const auto rule = beta_rule();
  const ComplexMatrix m = integrate_beta([](double t) -> ComplexMatrix { return ComplexMatrix::Identity(2, 2) * t * t; }, rule);
  EXPECT_NEAR(m(1, 1).real(), 1.0 / 3.0, 1e-10);
  EXPECT_NEAR(std::abs(m(0, 1)), 0.0, 1e-16);
}

}  // namespace
}  // namespace mtrace
