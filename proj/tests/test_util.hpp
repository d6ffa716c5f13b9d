/*
 * Copyright 2026 The coalex Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef COALEX_TESTS_TEST_UTIL_HPP_
#define COALEX_TESTS_TEST_UTIL_HPP_

#include <algorithm>
#include <cmath>
#include <vector>

#include "coalex/game.hpp"
#include "coalex/partition_tree.hpp"
#include "coalex/random.hpp"

namespace coalex::testing {

// v(S) = 1 iff |S| >= 2 on three players.
inline Game majority3() {
  return Game::tabulate(3, [](Mask s) { return cardinality(s) >= 2 ? 1.0 : 0.0; });
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return INFINITY;
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Random game with a nonzero empty-set value.
inline Game random_noncooperative(int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> t(std::size_t{1} << n);
  for (double& x : t) x = rng.uniform(-1.0, 1.0);
  return Game::dense(n, std::move(t));
}

inline Partition random_partition(int n, int max_blocks, Rng& rng) {
  std::vector<Mask> blocks(max_blocks, 0);
  for (int i = 0; i < n; ++i) blocks[rng.integer(0, max_blocks - 1)] |= bit(i);
  std::vector<Mask> nonempty;
  for (Mask b : blocks) {
    if (b) nonempty.push_back(b);
  }
  return Partition::from_masks(n, nonempty);
}

namespace detail {

inline int grow_subtree(TreeBuilder& b, std::vector<int> players, int depth, int max_depth,
                        Rng& rng) {
  if (players.size() == 1) return players[0];
  const double h = 1.0 - (depth + rng.uniform(0.0, 0.5)) / max_depth;
  if (depth == max_depth - 1 || rng.uniform() < 0.25) return b.join(players, h);
  const int k = rng.integer(2, std::min<int>(4, static_cast<int>(players.size())));
  std::vector<std::vector<int>> groups(k);
  for (std::size_t i = 0; i < players.size(); ++i) {
    const int g = i < static_cast<std::size_t>(k) ? static_cast<int>(i) : rng.integer(0, k - 1);
    groups[g].push_back(players[i]);
  }
  std::vector<int> children;
  for (auto& g : groups) children.push_back(grow_subtree(b, g, depth + 1, max_depth, rng));
  return b.join(children, h);
}

}  // namespace detail

// Random tree on n leaves with at most max_depth edges from root to leaf.
inline PartitionTree random_tree(int n, int max_depth, Rng& rng) {
  TreeBuilder b(n);
  std::vector<int> players(n);
  for (int i = 0; i < n; ++i) players[i] = i;
  for (int i = n - 1; i > 0; --i) std::swap(players[i], players[rng.integer(0, i)]);
  if (n == 1 || max_depth == 1) return b.build(players);
  const int k = rng.integer(2, std::min(4, n));
  std::vector<std::vector<int>> groups(k);
  for (int i = 0; i < n; ++i) groups[i < k ? i : rng.integer(0, k - 1)].push_back(players[i]);
  std::vector<int> children;
  for (auto& g : groups) children.push_back(detail::grow_subtree(b, g, 1, max_depth, rng));
  return b.build(children);
}

}  // namespace coalex::testing

#endif  // COALEX_TESTS_TEST_UTIL_HPP_
