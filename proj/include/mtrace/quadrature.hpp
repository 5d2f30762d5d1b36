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

// Gauss-Legendre rules for the two integrals that appear throughout:
// the beta-weighted real-line integral over t and the half-line integral
// over tau in [0, inf).

#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <type_traits>
#include <vector>

#include "mtrace/error.hpp"

namespace mtrace {

/// Keys: quad.real_line.half_width, quad.real_line.nodes, quad.half_line.nodes.
struct QuadratureConfig {
  double real_line_half_width = 12.0;
  std::size_t real_line_nodes = 400;
  std::size_t half_line_nodes = 200;
};

enum class QuadratureDomain { RealLineBeta, HalfLine };

struct QuadratureRule {
  QuadratureDomain domain = QuadratureDomain::RealLineBeta;
  std::vector<double> nodes;
  std::vector<double> weights;
  double truncation = 0.0;  // half-width T of [-T, T]; 0 for the half-line rule
  std::size_t node_count() const { return nodes.size(); }
};

/// (pi/2) (1 + cosh(pi t))^{-1}: even, positive, unit mass.
inline double beta_density(double t) {
  using std::numbers::pi;
  return 0.5 * pi / (1.0 + std::cosh(pi * t));
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
inline QuadratureRule gauss_legendre(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::ConfigError, "quadrature needs at least one node");
  using std::numbers::pi;
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double nd = static_cast<double>(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (static_cast<double>(i) + 0.75) / (nd + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kd = static_cast<double>(k);
        const double p2 = ((2.0 * kd - 1.0) * x * p1 - (kd - 1.0) * p0) / kd;
        p0 = p1;
        p1 = p2;
      }
      dp = nd * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

/// Gauss-Legendre on [-T, T] with beta(t) folded into the weights.
inline QuadratureRule beta_rule(double half_width, std::size_t nodes) {
  if (!(half_width > 0.0)) throw Error(ErrorCode::ConfigError, "real-line half width must be positive");
  QuadratureRule rule = gauss_legendre(nodes);
  rule.domain = QuadratureDomain::RealLineBeta;
  rule.truncation = half_width;
  for (std::size_t i = 0; i < nodes; ++i) {
    rule.nodes[i] *= half_width;
    rule.weights[i] *= half_width * beta_density(rule.nodes[i]);
  }
  return rule;
}

inline QuadratureRule beta_rule(const QuadratureConfig& cfg = {}) {
  return beta_rule(cfg.real_line_half_width, cfg.real_line_nodes);
}

/// tau = s / (1 - s) with Gauss-Legendre in s on (0, 1).
inline QuadratureRule half_line_rule(std::size_t nodes) {
  QuadratureRule rule = gauss_legendre(nodes);
  rule.domain = QuadratureDomain::HalfLine;
  rule.truncation = 0.0;
  for (std::size_t i = 0; i < nodes; ++i) {
    const double s = 0.5 * (rule.nodes[i] + 1.0);
    const double jac = 1.0 / ((1.0 - s) * (1.0 - s));
    rule.nodes[i] = s / (1.0 - s);
    rule.weights[i] *= 0.5 * jac;
  }
  return rule;
}

inline QuadratureRule half_line_rule(const QuadratureConfig& cfg) {
  return half_line_rule(cfg.half_line_nodes);
}

/// Mass of beta outside [-T, T] is at most 2 exp(-pi T); scale by sup |f|.
inline double beta_tail_bound(double sup_abs_f, double half_width) {
  return sup_abs_f * 2.0 * std::exp(-std::numbers::pi * half_width);
}

namespace detail {

template <class F>
auto accumulate_rule(F& f, const QuadratureRule& rule) {
  using Value = std::decay_t<decltype(f(0.0))>;
  Value sum = f(rule.nodes[0]) * rule.weights[0];
  for (std::size_t i = 1; i < rule.nodes.size(); ++i) sum += f(rule.nodes[i]) * rule.weights[i];
  return sum;
}

}  // namespace detail

/// Approximates the integral of f(t) beta(t) over the real line. f may be
/// scalar or matrix valued.
template <class F>
auto integrate_beta(F&& f, const QuadratureRule& rule) {
  if (rule.domain != QuadratureDomain::RealLineBeta) {
    throw Error(ErrorCode::ConfigError, "integrate_beta needs a beta-weighted real-line rule");
  }
  return detail::accumulate_rule(f, rule);
}

/// Approximates the integral of g(tau) over [0, inf); g must decay like tau^-2.
template <class G>
auto integrate_halfline(G&& g, const QuadratureRule& rule) {
  if (rule.domain != QuadratureDomain::HalfLine) {
    throw Error(ErrorCode::ConfigError, "integrate_halfline needs a half-line rule");
  }
  return detail::accumulate_rule(g, rule);
}

}  // namespace mtrace
