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

#include "coalex/clustering.hpp"

#include <algorithm>
#include <limits>

#include "coalex/error.hpp"

namespace coalex {

namespace {
constexpr double kLift = 1e-9;
}

ClusteringResult average_linkage(const DissimilarityMatrix& d) {
  const int n = d.size();
  if (n < 1) throw_invalid("clustering needs at least one feature");
  ClusteringResult result;
  std::vector<TreeNode> nodes(n);
  for (int i = 0; i < n; ++i) {
    nodes[i].id = i;
    nodes[i].leaf_player = i;
  }
  if (n == 1) {
    result.tree = PartitionTree(nodes);
    return result;
  }

  // Slot k holds the cluster currently stored at row k of `dist`.
  std::vector<double> dist(d.values());
  std::vector<int> slot_node(n), slot_size(n, 1);
  std::vector<char> active(n, 1);
  for (int i = 0; i < n; ++i) slot_node[i] = i;

  for (int step = 0; step < n - 1; ++step) {
    int bi = -1, bj = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      if (!active[i]) continue;
      for (int j = i + 1; j < n; ++j) {
        if (active[j] && dist[i * n + j] < best) {
          best = dist[i * n + j];
          bi = i;
          bj = j;
        }
      }
    }
    const int node = n + step;
    Merge m{slot_node[bi], slot_node[bj], node, best, slot_size[bi] + slot_size[bj]};
    result.merges.push_back(m);

    const double wi = slot_size[bi], wj = slot_size[bj];
    for (int k = 0; k < n; ++k) {
      if (!active[k] || k == bi || k == bj) continue;
      const double v = (wi * dist[k * n + bi] + wj * dist[k * n + bj]) / (wi + wj);
      dist[k * n + bi] = dist[bi * n + k] = v;
    }
    active[bj] = 0;
    slot_node[bi] = node;
    slot_size[bi] = m.size;
  }

  const int root = 2 * n - 2;
  nodes.resize(2 * n - 1);
  for (int t = 0; t < n - 1; ++t) {
    const Merge& m = result.merges[t];
    TreeNode& nd = nodes[m.node];
    nd.id = m.node;
    nd.children = {m.left, m.right};
    nd.raw_height = m.raw_height;
    nodes[m.left].parent = m.node;
    nodes[m.right].parent = m.node;
    const double below = std::max(nodes[m.left].height, nodes[m.right].height);
    const double child_raw = std::max(nodes[m.left].raw_height.value_or(0.0),
                                      nodes[m.right].raw_height.value_or(0.0));
    if (m.raw_height < child_raw) result.had_inversions = true;
    double h = m.raw_height;
    if (h <= below) h = below + kLift;
    if (m.node == root) {
      h = 1.0;
    } else if (h >= 1.0) {
      h = 1.0 - kLift * (n - t);
    }
    nd.height = h;
  }
  if (result.had_inversions) {
    result.notes.push_back("merge heights were not monotone; parents lifted above children");
  }
  result.tree = PartitionTree(std::move(nodes));
  for (const auto& w : result.tree.warnings()) result.notes.push_back(w);
  return result;
}

PartitionTree average_linkage_cluster(const DissimilarityMatrix& d) {
  return average_linkage(d).tree;
}

}  // namespace coalex
