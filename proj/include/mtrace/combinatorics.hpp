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

// Index bookkeeping for the tensor-product form of the n-matrix trace
// inequality: the Thue-Morse conjugation pattern, the shape parameters
// n' and rho, and the permutation of the middle matrices A_2..A_{n-1}.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "mtrace/error.hpp"

namespace mtrace {

/// beta_j from beta_0 = 0, beta_{2j} = beta_j, beta_{2j+1} = 1 - beta_j.
inline int thue_morse_shifted(std::size_t j) {
  int value = 0;
  for (; j > 0; j /= 2) {
    if (j % 2 == 1) value = 1 - value;
  }
  return value;
}

/// alpha_k = beta_{k-2}, defined for k >= 2. alpha_k = 1 marks a conjugated factor.
inline int thue_morse(std::size_t k) {
  if (k < 2) throw Error(ErrorCode::InvalidRange, "Thue-Morse index starts at k = 2");
  return thue_morse_shifted(k - 2);
}

/// alpha_2, ..., alpha_{count+1}.
inline std::vector<int> thue_morse_prefix(std::size_t count) {
  std::vector<int> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = thue_morse(i + 2);
  return out;
}

/// Smallest positive integer >= x; in particular ceil_pos(0) = 1.
inline int ceil_pos(double x) { return std::max(1, static_cast<int>(std::ceil(x))); }

struct ShapeParams {
  int n_prime = 1;  // ceil_pos(log2(n - 2))
  int rho = 0;      // 2^{n'} - (n - 2): identity factors padding the left operand
  int factor_count() const { return 1 << n_prime; }
};

inline ShapeParams shape_params(int n) {
  if (n < 3) throw Error(ErrorCode::InvalidRange, "need n >= 3, got " + std::to_string(n));
  int log2_ceil = 0;
  while ((1 << log2_ceil) < n - 2) ++log2_ceil;
  ShapeParams p;
  p.n_prime = ceil_pos(static_cast<double>(log2_ceil));
  p.rho = (1 << p.n_prime) - (n - 2);
  return p;
}

/// A bijection pi of {2, ..., n-1}. Slot k of the tensor layout carries
/// the matrix X_{pi(k)}.
struct MidPermutation {
  int n = 3;
  std::vector<int> image;  // image[k - 2] = pi(k)

  int operator()(int k) const { return image.at(static_cast<std::size_t>(k - 2)); }

  bool is_bijection() const {
    std::vector<int> sorted = image;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      if (sorted[i] != static_cast<int>(i) + 2) return false;
    }
    return static_cast<int>(sorted.size()) == n - 2;
  }

  bool is_identity() const {
    for (std::size_t i = 0; i < image.size(); ++i) {
      if (image[i] != static_cast<int>(i) + 2) return false;
    }
    return true;
  }

  MidPermutation inverse() const {
    MidPermutation inv{n, std::vector<int>(image.size())};
    for (std::size_t i = 0; i < image.size(); ++i) {
      inv.image[static_cast<std::size_t>(image[i] - 2)] = static_cast<int>(i) + 2;
    }
    return inv;
  }

  std::string to_string() const {
    std::string out = "{";
    for (std::size_t i = 0; i < image.size(); ++i) {
      if (i > 0) out += ", ";
      out += std::to_string(i + 2) + "->" + std::to_string(image[i]);
    }
    return out + "}";
  }

  friend bool operator==(const MidPermutation&, const MidPermutation&) = default;
};

namespace detail {

/// Permutation for n = 2^N + 2 by doubling from n = 3. From sigma at
/// n = 2^N + 2, the level n0 = 2^{N+1} + 2 map is (shifted indices m >= 0)
///   pi~(m) = sigma~(m/2)                for even m,
///   pi~(m) = n0 + 1 - sigma~((m-1)/2)   for odd m.
inline MidPermutation doubled_permutation(int levels) {
  MidPermutation pi{3, {2}};
  for (int level = 0; level < levels; ++level) {
    const int n0 = (1 << (level + 1)) + 2;
    MidPermutation next{n0, std::vector<int>(static_cast<std::size_t>(n0 - 2))};
    for (std::size_t m = 0; m < next.image.size(); ++m) {
      const int sigma = pi.image[m / 2];
      next.image[m] = (m % 2 == 0) ? sigma : n0 + 1 - sigma;
    }
    pi = std::move(next);
  }
  return pi;
}

}  // namespace detail

/// The permutation pi making the complex-power trace equal to the tensor
/// form, for any n >= 3.
///
/// For n not of the form 2^N + 2 the permutation for the next such size is
/// restricted: the matrices landing in the last rho slots are identities, so
/// their indices are dropped and the survivors are relabelled in order.
inline MidPermutation build_permutation(int n) {
  const ShapeParams shape = shape_params(n);
  if (n == 3) return {3, {2}};
  const int padded_n = shape.factor_count() + 2;
  const MidPermutation full = detail::doubled_permutation(shape.n_prime);
  if (padded_n == n) return full;

  std::vector<bool> is_identity(static_cast<std::size_t>(padded_n + 1), false);
  for (int k = n; k <= padded_n - 1; ++k) is_identity[static_cast<std::size_t>(full(k))] = true;
  std::vector<int> relabel(static_cast<std::size_t>(padded_n + 1), 0);
  int next = 2;
  for (int j = 2; j <= padded_n - 1; ++j) {
    if (!is_identity[static_cast<std::size_t>(j)]) relabel[static_cast<std::size_t>(j)] = next++;
  }
  MidPermutation pi{n, std::vector<int>(static_cast<std::size_t>(n - 2))};
  for (int k = 2; k <= n - 1; ++k) pi.image[static_cast<std::size_t>(k - 2)] = relabel[static_cast<std::size_t>(full(k))];
  return pi;
}

}  // namespace mtrace
