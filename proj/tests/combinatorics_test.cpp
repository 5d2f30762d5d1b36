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

#include <algorithm>
#include <numeric>
#include <vector>

#include "mtrace/combinatorics.hpp"
#include "mtrace/inequalities.hpp"
#include "oracles.hpp"

namespace mtrace {
namespace {

TEST(ThueMorse, FrozenPrefix) {
  EXPECT_EQ(thue_morse_prefix(8), (std::vector<int>{0, 1, 1, 0, 1, 0, 0, 1}));
}

TEST(ThueMorse, MatchesBinaryParityAndSubstitution) {
  for (unsigned j = 0; j < 1024; ++j) EXPECT_EQ(thue_morse_shifted(j), oracle::thue_morse_parity(j));
  // 0 -> 01, 1 -> 10
  const auto word = thue_morse_prefix(512);
  for (std::size_t j = 0; j < 256; ++j) {
    EXPECT_EQ(word[2 * j], word[j]);
    EXPECT_EQ(word[2 * j + 1], 1 - word[j]);
  }
}

TEST(ThueMorse, AlphaIsShiftedByTwo) {
  for (std::size_t k = 2; k < 40; ++k) EXPECT_EQ(thue_morse(k), thue_morse_shifted(k - 2));
  EXPECT_THROW((void)thue_morse(1), Error);
}

TEST(ShapeParams, FrozenTable) {
  struct Row { int n, n_prime, rho; };
  for (const Row& row : {Row{3, 1, 1}, Row{4, 1, 0}, Row{5, 2, 1}, Row{6, 2, 0}, Row{7, 3, 3}, Row{8, 3, 2},
                         Row{10, 3, 0}, Row{11, 4, 7}, Row{18, 4, 0}}) {
    const ShapeParams s = shape_params(row.n);
    EXPECT_EQ(s.n_prime, row.n_prime) << row.n;
    EXPECT_EQ(s.rho, row.rho) << row.n;
    EXPECT_EQ(s.factor_count(), 1 << row.n_prime);
  }
  EXPECT_EQ(ceil_pos(0.0), 1);
  EXPECT_EQ(ceil_pos(1.2), 2);
  try {
    (void)shape_params(2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidRange);
  }
}

TEST(BuildPermutation, SmallCasesAndIdentityAtFour) {
  EXPECT_TRUE(build_permutation(3).is_identity());
  EXPECT_TRUE(build_permutation(4).is_identity());
  const MidPermutation p5 = build_permutation(5);
  EXPECT_EQ(p5(3), 4);
  EXPECT_EQ(p5(4), 3);
  const MidPermutation p6 = build_permutation(6);
  EXPECT_EQ(p6.image, (std::vector<int>{2, 5, 3, 4}));
  EXPECT_EQ(p6.to_string(), "{2->2, 3->5, 4->3, 5->4}");
}

TEST(BuildPermutation, LargerCases) {
  EXPECT_EQ(build_permutation(7).image, (std::vector<int>{2, 6, 4, 5, 3}));
  EXPECT_EQ(build_permutation(8).image, (std::vector<int>{2, 7, 4, 5, 3, 6}));
  EXPECT_EQ(build_permutation(9).image, (std::vector<int>{2, 8, 5, 6, 3, 7, 4}));
  EXPECT_EQ(build_permutation(10).image, (std::vector<int>{2, 9, 5, 6, 3, 8, 4, 7}));
}

TEST(BuildPermutation, AlwaysABijectionFixingTwo) {
  for (int n = 3; n <= 40; ++n) {
    const MidPermutation p = build_permutation(n);
    EXPECT_EQ(p.n, n);
    EXPECT_TRUE(p.is_bijection()) << n;
    EXPECT_EQ(p(2), 2) << n;
    const MidPermutation inv = p.inverse();
    for (int k = 2; k < n; ++k) EXPECT_EQ(inv(p(k)), k);
  }
}

// Brute force: among all permutations of {2..n-1}, exactly one makes the
// tensor-product form equal the complex-power trace.
std::vector<MidPermutation> valid_permutations(int n) {
  const auto x = [&] {
    std::vector<PosDefMatrix> out;
    for (int k = 0; k < n; ++k) out.push_back(random_posdef(2, 7000 + static_cast<std::uint64_t>(k)));
    return out;
  }();
  std::vector<int> image(static_cast<std::size_t>(n - 2));
  std::iota(image.begin(), image.end(), 2);
  std::vector<MidPermutation> good;
  do {
    const MidPermutation pi{n, image};
    bool ok = true;
    for (double t : {0.7, -2.0}) ok = ok && key_lemma_check(x, t, pi, {0.0, 1e-9}).pass;
    if (ok) good.push_back(pi);
  } while (std::next_permutation(image.begin(), image.end()));
  return good;
}

TEST(BuildPermutation, AgreesWithBruteForceSearch) {
  for (int n = 3; n <= 6; ++n) {
    const auto good = valid_permutations(n);
    ASSERT_EQ(good.size(), 1u) << n;
    EXPECT_EQ(good.front(), build_permutation(n)) << n;
  }
}

}  // namespace
}  // namespace mtrace
