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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>

namespace mtrace {

enum class CheckKind { Identity, Inequality };

struct Tolerance {
  double atol = 0.0;
  double rtol = 0.0;
};

/// One verification verdict.
///
/// Identity checks pass iff |lhs - rhs| <= atol + rtol * max(|lhs|, |rhs|);
/// for matrix-valued identities lhs and rhs hold Frobenius norms and abs_gap
/// the Frobenius norm of the difference. Inequality checks pass iff
/// lhs <= rhs + atol + rtol * |rhs|.
struct TrialReport {
  std::string check_id;
  CheckKind kind = CheckKind::Identity;
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_gap = 0.0;
  double rel_gap = 0.0;
  Tolerance tolerance;
  bool pass = false;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> params;

  template <class T>
  TrialReport& with(const std::string& key, const T& value) {
    std::ostringstream os;
    os.precision(17);
    os << value;
    params[key] = os.str();
    return *this;
  }
};

namespace detail {

inline double relative(double gap, double scale) { return scale > 0.0 ? gap / scale : gap; }

}  // namespace detail

/// Identity verdict from an explicitly computed gap (e.g. a matrix norm).
inline TrialReport identity_report(std::string id, double lhs, double rhs, double abs_gap, Tolerance tol,
                                   std::uint64_t seed = 0) {
  TrialReport r;
  r.check_id = std::move(id);
  r.kind = CheckKind::Identity;
  r.lhs = lhs;
  r.rhs = rhs;
  r.abs_gap = abs_gap;
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  r.rel_gap = detail::relative(abs_gap, scale);
  r.tolerance = tol;
  r.pass = std::isfinite(abs_gap) && abs_gap <= tol.atol + tol.rtol * scale;
  r.seed = seed;
  return r;
}

inline TrialReport identity_report(std::string id, double lhs, double rhs, Tolerance tol, std::uint64_t seed = 0) {
  return identity_report(std::move(id), lhs, rhs, std::abs(lhs - rhs), tol, seed);
}

inline TrialReport inequality_report(std::string id, double lhs, double rhs, Tolerance tol, std::uint64_t seed = 0) {
  TrialReport r;
  r.check_id = std::move(id);
  r.kind = CheckKind::Inequality;
  r.lhs = lhs;
  r.rhs = rhs;
  r.abs_gap = std::abs(lhs - rhs);
  r.rel_gap = detail::relative(r.abs_gap, std::max(std::abs(lhs), std::abs(rhs)));
  r.tolerance = tol;
  r.pass = std::isfinite(lhs) && std::isfinite(rhs) && lhs <= rhs + tol.atol + tol.rtol * std::abs(rhs);
  r.seed = seed;
  return r;
}

}  // namespace mtrace
