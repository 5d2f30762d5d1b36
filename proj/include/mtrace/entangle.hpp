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

// Non-normalized maximally entangled vectors
//
//   |Omega_m> = sum_{l_1..l_m} |l_1 .. l_m> (x) |l_1 .. l_m>,   ||Omega_m||^2 = d^m,
//
// their projectors P_m = |Omega_m><Omega_m|, and the tensor-factor layout of
// the resolvent form of the n-matrix inequality. Factor i of the first
// H^{(x)m} pairs with factor m + i of the second. Complex conjugation and
// transposition are taken in the standard coordinate basis.

#pragma once

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "mtrace/combinatorics.hpp"
#include "mtrace/core_linalg.hpp"
#include "mtrace/trial_report.hpp"

namespace mtrace {

namespace detail {

/// d^power, or -1 once the value exceeds `cap`.
inline Index capped_power(Index d, int power, Index cap) {
  Index out = 1;
  for (int i = 0; i < power; ++i) {
    out *= d;
    if (out > cap) return -1;
  }
  return out;
}

inline Index block_dimension(Index d, int m) {
  if (d < 2 || m < 1) throw Error(ErrorCode::InvalidRange, "entangled state needs d >= 2 and m >= 1");
  const Index total = capped_power(d, 2 * m, kMaxTotalDimension);
  if (total < 0) {
    throw Error(ErrorCode::DimensionCap, "d^(2m) exceeds " + std::to_string(kMaxTotalDimension));
  }
  return capped_power(d, m, kMaxTotalDimension);
}

}  // namespace detail

struct EntangledState {
  Index d = 2;
  int m = 1;
  ComplexVector vector;  // length d^{2m}, 0/1 entries
};

inline EntangledState omega(Index d, int m) {
  const Index block = detail::block_dimension(d, m);
  EntangledState s{d, m, ComplexVector::Zero(block * block)};
  for (Index l = 0; l < block; ++l) s.vector(l * block + l) = 1.0;
  return s;
}

struct EntangledProjector {
  Index d = 2;
  int m = 1;
  ComplexMatrix matrix;  // rank one, trace d^m, P^2 = d^m P
};

inline EntangledProjector projector(Index d, int m) {
  const EntangledState s = omega(d, m);
  return {d, m, s.vector * s.vector.adjoint()};
}

/// Tr[P_m M] = <Omega_m| M |Omega_m> without forming P_m.
inline Complex projector_trace(const ComplexMatrix& m_op, Index d, int m) {
  const Index block = detail::block_dimension(d, m);
  if (m_op.rows() != block * block || m_op.cols() != block * block) {
    throw Error(ErrorCode::DimensionMismatch, "operator does not act on H^(2m)");
  }
  Complex sum = 0.0;
  for (Index a = 0; a < block; ++a)
    for (Index b = 0; b < block; ++b) sum += m_op(a * block + a, b * block + b);
  return sum;
}

/// Tr[XY] = Tr[P_m (X (x) Y^T)] = Tr[P_m (X (x) conj(Y))] for self-adjoint X, Y
/// on H^{(x)m}. Passes when every pairwise difference is within
/// atol_per_unit_norm * ||X||_F ||Y||_F.
inline TrialReport pairing_identity_check(const ComplexMatrix& x, const ComplexMatrix& y, Index d, int m,
                                          double atol_per_unit_norm = 1e-12, std::uint64_t seed = 0) {
  const Index block = detail::block_dimension(d, m);
  if (x.rows() != block || x.cols() != block || y.rows() != block || y.cols() != block) {
    throw Error(ErrorCode::DimensionMismatch, "pairing identity needs X, Y on H^(m)");
  }
  const Complex direct = (x * y).trace();
  const Complex via_transpose = projector_trace(kron(x, y.transpose()), d, m);
  const Complex via_conjugate = projector_trace(kron(x, y.conjugate()), d, m);
  const double gap = std::max({std::abs(direct - via_transpose), std::abs(direct - via_conjugate),
                               std::abs(via_transpose - via_conjugate)});
  const Tolerance tol{atol_per_unit_norm * x.norm() * y.norm(), 0.0};
  return identity_report("pairing_identity", direct.real(), via_conjugate.real(), gap, tol, seed)
      .with("d", d)
      .with("m", m);
}

enum class SlotRole { MiddleMatrix, IdentityPadding };

/// One H factor of the left operand.
struct LeftSlot {
  SlotRole role = SlotRole::MiddleMatrix;
  int position = 2;         // k in 2..n-1 for middle matrices, 0 for padding
  bool conjugated = false;  // alpha_k
};

enum class BlockRole { FirstMatrix, LastMatrixConjugated, Projector };

/// A run of consecutive H factors of the right operand.
struct RightBlock {
  BlockRole role = BlockRole::FirstMatrix;
  int first_factor = 1;  // 1-based
  int factor_count = 1;
  int projector_m = 0;   // 2^j for projector blocks; pairs halves of the block
};

/// Placement of every H factor in
///   Tr[ P_{2^{n'-1}} T_{ (x)_k C^{a_k} A_k^{-1} C^{a_k} (x) I^{(x)rho} }( A_1 (x) conj(A_n) (x) (x)_j P_{2^j} ) ].
///
/// Left operand: slots 1..n-2 carry k = 2..n-1 in order, then rho identities.
/// Right operand: A_1, conj(A_n), then P_{2^j} on consecutive blocks of
/// 2^{j+1} factors for j = 0..n'-2. The outer projector pairs the first half
/// of all 2^{n'} factors with the second half.
struct FactorLayout {
  int n = 3;
  Index d = 2;
  ShapeParams shape;
  std::vector<LeftSlot> left;
  std::vector<RightBlock> right;

  int factor_count() const { return shape.factor_count(); }
  int outer_projector_m() const { return shape.factor_count() / 2; }
  Index total_dimension() const { return detail::capped_power(d, factor_count(), kMaxTotalDimension); }

  std::string describe() const {
    std::ostringstream os;
    os << "n = " << n << ", d = " << d << ", n' = " << shape.n_prime << ", rho = " << shape.rho << ", "
       << factor_count() << " factors of H (total dimension " << total_dimension() << ")\n";
    os << "  left operand : ";
    for (std::size_t i = 0; i < left.size(); ++i) {
      if (i > 0) os << " (x) ";
      if (left[i].role == SlotRole::IdentityPadding) {
        os << "I";
      } else {
        os << (left[i].conjugated ? "conj(A_" : "A_") << left[i].position << (left[i].conjugated ? ")^-1" : "^-1");
      }
    }
    os << "\n  right operand: ";
    for (std::size_t i = 0; i < right.size(); ++i) {
      if (i > 0) os << " (x) ";
      const auto& b = right[i];
      switch (b.role) {
        case BlockRole::FirstMatrix: os << "A_1"; break;
        case BlockRole::LastMatrixConjugated: os << "conj(A_" << n << ")"; break;
        case BlockRole::Projector:
          os << "P_" << b.projector_m << "[factors " << b.first_factor << ".." << b.first_factor + b.factor_count - 1
             << "]";
          break;
      }
    }
    os << "\n  outer projector: P_" << outer_projector_m() << " pairing factors 1.." << outer_projector_m()
       << " with " << outer_projector_m() + 1 << ".." << factor_count() << "\n";
    return os.str();
  }
};

inline FactorLayout build_layout(int n, Index d) {
  if (d < 2) throw Error(ErrorCode::InvalidRange, "local dimension must be >= 2");
  FactorLayout layout;
  layout.n = n;
  layout.d = d;
  layout.shape = shape_params(n);
  if (layout.total_dimension() < 0) {
    throw Error(ErrorCode::DimensionCap, "d^(2^n') exceeds " + std::to_string(kMaxTotalDimension) + " for n = " +
                                             std::to_string(n) + ", d = " + std::to_string(d));
  }
  for (int k = 2; k <= n - 1; ++k) {
    layout.left.push_back({SlotRole::MiddleMatrix, k, thue_morse(static_cast<std::size_t>(k)) == 1});
  }
  for (int i = 0; i < layout.shape.rho; ++i) layout.left.push_back({SlotRole::IdentityPadding, 0, false});

  layout.right.push_back({BlockRole::FirstMatrix, 1, 1, 0});
  layout.right.push_back({BlockRole::LastMatrixConjugated, 2, 1, 0});
  int next = 3;
  for (int j = 0; j <= layout.shape.n_prime - 2; ++j) {
    const int m = 1 << j;
    layout.right.push_back({BlockRole::Projector, next, 2 * m, m});
    next += 2 * m;
  }
  return layout;
}

/// Left operand with `slot_matrix(k)` in slot k (conjugated when alpha_k = 1)
/// and identities in the padding slots.
template <class SlotMatrix>
ComplexMatrix assemble_left(const FactorLayout& layout, SlotMatrix&& slot_matrix) {
  std::vector<ComplexMatrix> factors;
  factors.reserve(layout.left.size());
  for (const auto& slot : layout.left) {
    if (slot.role == SlotRole::IdentityPadding) {
      factors.push_back(identity(layout.d));
    } else {
      const ComplexMatrix m = slot_matrix(slot.position);
      factors.push_back(slot.conjugated ? ComplexMatrix(m.conjugate()) : m);
    }
  }
  return kron_all(factors);
}

/// A_1 (x) conj(A_n) (x) P_1 (x) P_2 (x) ... (x) P_{2^{n'-2}}.
inline ComplexMatrix assemble_right(const FactorLayout& layout, const ComplexMatrix& first,
                                    const ComplexMatrix& last) {
  std::vector<ComplexMatrix> factors;
  for (const auto& block : layout.right) {
    switch (block.role) {
      case BlockRole::FirstMatrix: factors.push_back(first); break;
      case BlockRole::LastMatrixConjugated: factors.push_back(last.conjugate()); break;
      case BlockRole::Projector: factors.push_back(projector(layout.d, block.projector_m).matrix); break;
    }
  }
  return kron_all(factors);
}

/// Tr over H^{(x)2^{n'}} of P_{2^{n'-1}} M.
inline Complex outer_projector_trace(const FactorLayout& layout, const ComplexMatrix& m_op) {
  return projector_trace(m_op, layout.d, layout.outer_projector_m());
}

}  // namespace mtrace
