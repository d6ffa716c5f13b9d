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

#ifndef COALEX_PARTITION_TREE_HPP_
#define COALEX_PARTITION_TREE_HPP_

#include <optional>
#include <string>
#include <vector>

#include "coalex/coalitional.hpp"
#include "coalex/game.hpp"

namespace coalex {

struct TreeNode {
  int id = 0;
  double height = 0.0;
  std::optional<int> parent;
  std::vector<int> children;
  std::optional<int> leaf_player;
  // Unscaled merge height, kept when the tree comes from clustering.
  std::optional<double> raw_height;
};

// Rooted tree whose leaves are the players. Heights lie in [0, 1]: leaves at
// 0, root at 1, strictly increasing towards the root, pairwise distinct on
// non-terminal nodes.
class PartitionTree {
 public:
  PartitionTree() = default;

  // Validates the node list (ids must be 0..R-1 in some order). Equal
  // heights on non-terminal nodes are separated by k * 1e-9 offsets in id
  // order and reported through warnings().
  explicit PartitionTree(std::vector<TreeNode> nodes);

  // Depth-two tree: root over one internal node per non-singleton block.
  static PartitionTree from_partition(const Partition& p, double inner_height = 0.5);

  int num_players() const { return num_players_; }
  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  int root() const { return root_; }
  const TreeNode& node(int id) const { return nodes_[id]; }
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  bool is_leaf(int id) const { return nodes_[id].children.empty(); }
  int leaf_of(int player) const { return leaf_of_[player]; }
  // S(node): players under the node.
  Mask players(int id) const { return players_[id]; }
  bool children_all_leaves(int id) const;
  int depth() const;
  const std::vector<std::string>& warnings() const { return warnings_; }

  // Node ids forming the cross-section at alpha, ordered by smallest player.
  std::vector<int> cut_nodes(double alpha) const;
  Partition cut(double alpha) const;

  // Partition of S(node) by its children, as masks in child order.
  std::vector<Mask> child_blocks(int id) const;

 private:
  void validate_and_index();

  std::vector<TreeNode> nodes_;
  std::vector<Mask> players_;
  std::vector<int> leaf_of_;
  std::vector<std::string> warnings_;
  int root_ = -1;
  int num_players_ = 0;
};

// Incremental construction: leaves get ids 0..n-1 (leaf k holds player k).
class TreeBuilder {
 public:
  explicit TreeBuilder(int n);
  int join(std::vector<int> children, double height);
  // Adds the root at height 1 over `children` and builds the tree.
  PartitionTree build(std::vector<int> children);

 private:
  std::vector<TreeNode> nodes_;
};

struct RecursiveValues {
  std::vector<double> per_node;  // indexed by node id
  ValueVector leaf_values;       // indexed by player
};

// Top-down recursive values: the root gets v(N) - v(empty); the children of
// a node get the outer value of its node game's quotient, except children of
// a non-root node whose children are all leaves, which get the inner value
// of the node game.
RecursiveValues recursive_values(const PartitionTree& tree, const Game& v,
                                 const CoalitionalValueSpec& spec);

struct TreeGroupExplanation {
  double alpha = 0.0;
  Partition partition;
  std::vector<int> nodes;
  std::vector<double> leaf_sums;    // sum of leaf values inside each block
  std::vector<double> node_values;  // recursive value of the block's node
};

TreeGroupExplanation tree_group_explanations(const PartitionTree& tree, const Game& v,
                                             const CoalitionalValueSpec& spec,
                                             double alpha);
TreeGroupExplanation group_explanation_at(const PartitionTree& tree,
                                          const RecursiveValues& values, double alpha);

// Newick string with branch lengths equal to height differences. Leaves are
// labelled by `names` when given, by player index otherwise.
std::string to_newick(const PartitionTree& tree,
                      const std::vector<std::string>& names = {});
std::string to_dot(const PartitionTree& tree, const std::vector<std::string>& names = {});

}  // namespace coalex

#endif  // COALEX_PARTITION_TREE_HPP_
