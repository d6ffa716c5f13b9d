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

#include "coalex/partition_tree.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <unordered_map>

#include "coalex/error.hpp"

namespace coalex {

namespace {

constexpr double kTieOffset = 1e-9;

std::string fmt_double(double x) {
  std::ostringstream s;
  s.precision(10);
  s << x;
  return s.str();
}

}  // namespace

PartitionTree::PartitionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {
  validate_and_index();
}

void PartitionTree::validate_and_index() {
  if (nodes_.empty()) throw_invalid("tree has no nodes");
  std::sort(nodes_.begin(), nodes_.end(),
            [](const TreeNode& a, const TreeNode& b) { return a.id < b.id; });
  const int count = num_nodes();
  for (int k = 0; k < count; ++k) {
    if (nodes_[k].id != k) throw_invalid("tree node ids must be 0..R-1 without gaps");
  }

  root_ = -1;
  num_players_ = 0;
  for (const TreeNode& nd : nodes_) {
    if (!nd.parent) {
      if (root_ != -1) throw_invalid("tree has more than one root");
      root_ = nd.id;
    } else if (*nd.parent < 0 || *nd.parent >= count || *nd.parent == nd.id) {
      throw_invalid("node " + std::to_string(nd.id) + " has an invalid parent");
    }
    if (nd.children.empty()) {
      if (!nd.leaf_player) {
        throw_invalid("leaf node " + std::to_string(nd.id) + " has no player");
      }
      ++num_players_;
    } else if (nd.leaf_player) {
      throw_invalid("internal node " + std::to_string(nd.id) + " carries a player");
    }
    if (!(nd.height >= 0.0 && nd.height <= 1.0)) {
      throw_invalid("node " + std::to_string(nd.id) + " height outside [0,1]");
    }
  }
  if (root_ == -1) throw_invalid("tree has no root");
  if (num_players_ > kMaxPlayers) throw_invalid("too many leaves");

  leaf_of_.assign(num_players_, -1);
  for (const TreeNode& nd : nodes_) {
    if (nd.children.empty()) {
      const int p = *nd.leaf_player;
      if (p < 0 || p >= num_players_ || leaf_of_[p] != -1) {
        throw_invalid("leaf players must be a bijection onto 0..n-1");
      }
      leaf_of_[p] = nd.id;
      if (nd.height != 0.0) throw_invalid("leaf heights must be 0");
    } else {
      if (nd.children.size() < 2) {
        throw_invalid("internal node " + std::to_string(nd.id) + " has fewer than 2 children");
      }
      for (int c : nd.children) {
        if (c < 0 || c >= count || nodes_[c].parent != nd.id) {
          throw_invalid("child/parent links disagree at node " + std::to_string(nd.id));
        }
      }
    }
  }
  for (const TreeNode& nd : nodes_) {
    if (nd.parent) {
      const auto& sib = nodes_[*nd.parent].children;
      if (std::count(sib.begin(), sib.end(), nd.id) != 1) {
        throw_invalid("node " + std::to_string(nd.id) + " missing from its parent's children");
      }
    }
  }
  if (nodes_[root_].children.empty() && num_players_ != 1) {
    throw_invalid("root without children");
  }
  if (!nodes_[root_].children.empty() && nodes_[root_].height != 1.0) {
    throw_invalid("root height must be 1");
  }

  // Reachability and player sets, children before parents.
  players_.assign(count, 0);
  std::vector<int> order;
  order.reserve(count);
  std::vector<int> stack{root_};
  std::vector<char> seen(count, 0);
  while (!stack.empty()) {
    const int id = stack.back();
    stack.pop_back();
    if (seen[id]) throw_invalid("tree contains a cycle");
    seen[id] = 1;
    order.push_back(id);
    for (int c : nodes_[id].children) stack.push_back(c);
  }
  if (static_cast<int>(order.size()) != count) throw_invalid("tree is not connected");
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const TreeNode& nd = nodes_[*it];
    if (nd.children.empty()) {
      players_[nd.id] = bit(*nd.leaf_player);
    } else {
      for (int c : nd.children) players_[nd.id] |= players_[c];
    }
  }

  // Separate tied heights of non-terminal nodes below the root.
  std::map<double, std::vector<int>> by_height;
  for (const TreeNode& nd : nodes_) {
    if (!nd.children.empty() && nd.id != root_) by_height[nd.height].push_back(nd.id);
  }
  for (auto& [h, ids] : by_height) {
    if (ids.size() < 2) continue;
    for (std::size_t k = 1; k < ids.size(); ++k) {
      nodes_[ids[k]].height = h + static_cast<double>(k) * kTieOffset;
    }
    warnings_.push_back(std::to_string(ids.size()) + " internal nodes share height " +
                        fmt_double(h) + "; separated by " + fmt_double(kTieOffset) +
                        " offsets");
  }
  std::vector<double> internal;
  for (const TreeNode& nd : nodes_) {
    if (!nd.children.empty()) internal.push_back(nd.height);
  }
  std::sort(internal.begin(), internal.end());
  if (std::adjacent_find(internal.begin(), internal.end()) != internal.end()) {
    throw_invalid("internal node heights could not be made distinct");
  }
  for (const TreeNode& nd : nodes_) {
    if (nd.parent && !(nd.height < nodes_[*nd.parent].height)) {
      throw_invalid("node " + std::to_string(nd.id) +
                    " is not strictly below its parent");
    }
  }
}

PartitionTree PartitionTree::from_partition(const Partition& p, double inner_height) {
  if (!(inner_height > 0.0 && inner_height < 1.0)) {
    throw_invalid("inner height must lie in (0,1)");
  }
  TreeBuilder b(p.num_players());
  std::vector<int> top;
  const int m = p.num_blocks();
  for (int j = 0; j < m; ++j) {
    const auto players = members(p.block(j));
    if (players.size() == 1) {
      top.push_back(players[0]);
    } else {
      const double h = inner_height + (1.0 - inner_height) * j / (m + 1.0);
      top.push_back(b.join(players, h));
    }
  }
  return b.build(top);
}

bool PartitionTree::children_all_leaves(int id) const {
  const auto& ch = nodes_[id].children;
  return !ch.empty() &&
         std::all_of(ch.begin(), ch.end(), [&](int c) { return is_leaf(c); });
}

int PartitionTree::depth() const {
  int best = 0;
  for (int p = 0; p < num_players_; ++p) {
    int d = 0;
    for (int id = leaf_of_[p]; nodes_[id].parent; id = *nodes_[id].parent) ++d;
    best = std::max(best, d);
  }
  return best;
}

std::vector<int> PartitionTree::cut_nodes(double alpha) const {
  if (!(alpha >= 0.0)) throw_invalid("alpha must be nonnegative");
  std::vector<int> out;
  if (alpha == 0.0) {
    for (int p = 0; p < num_players_; ++p) out.push_back(leaf_of_[p]);
  } else if (alpha > 1.0 || nodes_[root_].children.empty()) {
    out.push_back(root_);
  } else {
    for (const TreeNode& nd : nodes_) {
      if (nd.parent && nd.height < alpha && alpha <= nodes_[*nd.parent].height) {
        out.push_back(nd.id);
      }
    }
  }
  std::sort(out.begin(), out.end(), [&](int a, int b) {
    return std::countr_zero(players_[a]) < std::countr_zero(players_[b]);
  });
  return out;
}

Partition PartitionTree::cut(double alpha) const {
  std::vector<Mask> blocks;
  for (int id : cut_nodes(alpha)) blocks.push_back(players_[id]);
  return Partition::from_masks(num_players_, std::move(blocks));
}

std::vector<Mask> PartitionTree::child_blocks(int id) const {
  std::vector<Mask> out;
  for (int c : nodes_[id].children) out.push_back(players_[c]);
  return out;
}

TreeBuilder::TreeBuilder(int n) {
  for (int i = 0; i < n; ++i) {
    TreeNode nd;
    nd.id = i;
    nd.leaf_player = i;
    nodes_.push_back(nd);
  }
}

int TreeBuilder::join(std::vector<int> children, double height) {
  const int id = static_cast<int>(nodes_.size());
  for (int c : children) {
    if (c < 0 || c >= id || nodes_[c].parent) throw_invalid("invalid child in join");
    nodes_[c].parent = id;
  }
  TreeNode nd;
  nd.id = id;
  nd.height = height;
  nd.children = std::move(children);
  nodes_.push_back(std::move(nd));
  return id;
}

PartitionTree TreeBuilder::build(std::vector<int> children) {
  if (nodes_.size() == 1 && children == std::vector<int>{0}) return PartitionTree(nodes_);
  if (children.size() == 1 && !nodes_[children[0]].children.empty()) {
    nodes_[children[0]].height = 1.0;
    return PartitionTree(nodes_);
  }
  join(std::move(children), 1.0);
  return PartitionTree(nodes_);
}

namespace {

// Node games v^(node) evaluated on demand and memoized per node.
class TreeEvaluator {
 public:
  TreeEvaluator(const PartitionTree& tree, const Game& v, const CoalitionalValueSpec& spec)
      : tree_(tree), root_game_(centered(v)), spec_(spec), memo_(tree.num_nodes()),
        unions_(tree.num_nodes()), child_index_(tree.num_nodes(), -1) {
    for (const TreeNode& nd : tree.nodes()) {
      if (nd.children.empty()) continue;
      if (nd.children.size() > static_cast<std::size_t>(kDenseCap)) {
        throw_invalid("node has more children than the dense cap");
      }
      for (std::size_t k = 0; k < nd.children.size(); ++k) {
        child_index_[nd.children[k]] = static_cast<int>(k);
      }
      std::vector<Mask> blocks = tree.child_blocks(nd.id);
      std::vector<Mask> u(std::size_t{1} << blocks.size(), 0);
      for (std::size_t a = 1; a < u.size(); ++a) {
        u[a] = u[a & (a - 1)] | blocks[std::countr_zero(a)];
      }
      unions_[nd.id] = std::move(u);
    }
  }

  double game(int id, Mask t) {
    if (id == tree_.root()) return root_game_(t);
    auto& memo = memo_[id];
    if (auto it = memo.find(t); it != memo.end()) return it->second;
    const int parent = *tree_.node(id).parent;
    const int j = child_index_[id];
    const auto& u = unions_[parent];
    const int m = static_cast<int>(tree_.node(parent).children.size());
    const Mask bj = bit(j);
    std::vector<double> table(u.size());
    if (spec_.family() == IntermediateFamily::kModifiedQuotient) {
      for (std::size_t a = 0; a < u.size(); ++a) {
        table[a] = (a & bj) ? game(parent, u[a & ~bj] | t) : game(parent, u[a]);
      }
    } else {
      const Mask s = tree_.players(id);
      const double ratio = static_cast<double>(cardinality(t)) / cardinality(s);
      const double shift = game(parent, t) - ratio * game(parent, s);
      for (std::size_t a = 0; a < u.size(); ++a) {
        table[a] = ratio * game(parent, u[a]) + cardinality(a) * shift;
      }
    }
    const double val = spec_.outer().at(Game::dense(m, std::move(table)), j);
    memo.emplace(t, val);
    return val;
  }

  // Values of the children of an internal node.
  std::vector<double> child_values(int id) {
    const TreeNode& nd = tree_.node(id);
    const int m = static_cast<int>(nd.children.size());
    const bool inner_branch = id != tree_.root() && tree_.children_all_leaves(id);
    if (!inner_branch) {
      const auto& u = unions_[id];
      std::vector<double> table(u.size());
      for (std::size_t a = 0; a < u.size(); ++a) table[a] = game(id, u[a]);
      return spec_.outer()(Game::dense(m, std::move(table)));
    }
    std::vector<int> pos;
    for (int c : nd.children) pos.push_back(*tree_.node(c).leaf_player);
    const auto dep = deposit_table(pos);
    std::vector<double> table(dep.size());
    for (std::size_t t = 0; t < dep.size(); ++t) table[t] = game(id, dep[t]);
    return spec_.inner()(Game::dense(m, std::move(table)));
  }

  double root_value() const { return root_game_(tree_.players(tree_.root())); }

 private:
  const PartitionTree& tree_;
  Game root_game_;
  const CoalitionalValueSpec& spec_;
  std::vector<std::unordered_map<Mask, double>> memo_;
  std::vector<std::vector<Mask>> unions_;
  std::vector<int> child_index_;
};

}  // namespace

RecursiveValues recursive_values(const PartitionTree& tree, const Game& v,
                                 const CoalitionalValueSpec& spec) {
  if (tree.num_players() != v.size()) throw_invalid("tree and game sizes differ");
  TreeEvaluator eval(tree, v, spec);
  RecursiveValues out;
  out.per_node.assign(tree.num_nodes(), 0.0);
  out.per_node[tree.root()] = eval.root_value();
  for (const TreeNode& nd : tree.nodes()) {
    if (nd.children.empty()) continue;
    const std::vector<double> vals = eval.child_values(nd.id);
    for (std::size_t k = 0; k < nd.children.size(); ++k) {
      out.per_node[nd.children[k]] = vals[k];
    }
  }
  out.leaf_values.assign(tree.num_players(), 0.0);
  for (int p = 0; p < tree.num_players(); ++p) {
    out.leaf_values[p] = out.per_node[tree.leaf_of(p)];
  }
  return out;
}

TreeGroupExplanation group_explanation_at(const PartitionTree& tree,
                                          const RecursiveValues& values, double alpha) {
  TreeGroupExplanation g;
  g.alpha = alpha;
  g.nodes = tree.cut_nodes(alpha);
  g.partition = tree.cut(alpha);
  for (int id : g.nodes) {
    double sum = 0.0;
    for (int p : members(tree.players(id))) sum += values.leaf_values[p];
    g.leaf_sums.push_back(sum);
    g.node_values.push_back(values.per_node[id]);
  }
  return g;
}

TreeGroupExplanation tree_group_explanations(const PartitionTree& tree, const Game& v,
                                             const CoalitionalValueSpec& spec,
                                             double alpha) {
  return group_explanation_at(tree, recursive_values(tree, v, spec), alpha);
}

namespace {

std::string leaf_label(const PartitionTree& tree, int id,
                       const std::vector<std::string>& names) {
  const int p = *tree.node(id).leaf_player;
  return p < static_cast<int>(names.size()) ? names[p] : std::to_string(p);
}

void newick_rec(const PartitionTree& tree, int id, const std::vector<std::string>& names,
                std::ostringstream& out) {
  const TreeNode& nd = tree.node(id);
  if (nd.children.empty()) {
    out << leaf_label(tree, id, names);
  } else {
    out << '(';
    for (std::size_t k = 0; k < nd.children.size(); ++k) {
      if (k) out << ',';
      newick_rec(tree, nd.children[k], names, out);
    }
    out << ')';
  }
  if (nd.parent) out << ':' << fmt_double(tree.node(*nd.parent).height - nd.height);
}

}  // namespace

std::string to_newick(const PartitionTree& tree, const std::vector<std::string>& names) {
  std::ostringstream out;
  newick_rec(tree, tree.root(), names, out);
  out << ';';
  return out.str();
}

std::string to_dot(const PartitionTree& tree, const std::vector<std::string>& names) {
  std::ostringstream out;
  out << "digraph partition_tree {\n  node [shape=box];\n";
  for (const TreeNode& nd : tree.nodes()) {
    out << "  n" << nd.id << " [label=\"";
    if (nd.children.empty()) {
      out << leaf_label(tree, nd.id, names);
    } else {
      out << "h=" << fmt_double(nd.height);
    }
    out << "\"];\n";
  }
  for (const TreeNode& nd : tree.nodes()) {
    for (int c : nd.children) out << "  n" << nd.id << " -> n" << c << ";\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace coalex
