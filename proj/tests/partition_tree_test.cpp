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

#include <gtest/gtest.h>

#include "coalex/error.hpp"
#include "coalex/partition_tree.hpp"
#include "test_util.hpp"

namespace coalex {
namespace {

using testing::max_abs_diff;

// ((0,1)@0.3,(2,3)@0.6,4) under the root.
PartitionTree sample_tree() {
  TreeBuilder b(5);
  const int a = b.join({0, 1}, 0.3);
  const int c = b.join({2, 3}, 0.6);
  return b.build({a, c, 4});
}

TEST(Tree, StructureAndCuts) {
  const PartitionTree t = sample_tree();
  EXPECT_EQ(t.num_players(), 5);
  EXPECT_EQ(t.num_nodes(), 8);
  EXPECT_EQ(t.depth(), 2);
  EXPECT_EQ(t.node(t.root()).height, 1.0);
  EXPECT_EQ(t.players(t.root()), full_mask(5));
  EXPECT_TRUE(t.children_all_leaves(5));
  EXPECT_FALSE(t.children_all_leaves(t.root()));
  EXPECT_EQ(to_string(t.cut(0.0)), to_string(Partition::singletons(5)));
  EXPECT_EQ(to_string(t.cut(0.2)), to_string(Partition::singletons(5)));
  EXPECT_EQ(to_string(t.cut(0.3)), to_string(Partition::singletons(5)));
  EXPECT_EQ(to_string(t.cut(0.31)),
            to_string(Partition::from_blocks(5, {{0, 1}, {2}, {3}, {4}})));
  EXPECT_EQ(to_string(t.cut(0.7)), to_string(Partition::from_blocks(5, {{0, 1}, {2, 3}, {4}})));
  EXPECT_EQ(to_string(t.cut(1.0)), to_string(Partition::from_blocks(5, {{0, 1}, {2, 3}, {4}})));
  EXPECT_EQ(to_string(t.cut(1.5)), to_string(Partition::grand(5)));
  EXPECT_THROW(t.cut(-0.1), InvalidArgument);
}

TEST(Tree, CutsAreNested) {
  Rng rng(3);
  for (int k = 0; k < 30; ++k) {
    const PartitionTree t = testing::random_tree(rng.integer(2, 10), 4, rng);
    Partition prev = t.cut(0.0);
    for (double a = 0.05; a <= 1.2; a += 0.05) {
      const Partition cur = t.cut(a);
      EXPECT_TRUE(cur.is_coarsening_of(prev));
      prev = cur;
    }
  }
}

TEST(Tree, RandomTreesRespectDepthBound) {
  Rng rng(9);
  for (int k = 0; k < 50; ++k) {
    const int n = rng.integer(1, 10);
    const PartitionTree t = testing::random_tree(n, 4, rng);
    EXPECT_EQ(t.num_players(), n);
    EXPECT_LE(t.depth(), 4);
  }
}

TEST(Tree, ValidationErrors) {
  auto leaf = [](int id, int parent, int player) {
    TreeNode nd;
    nd.id = id;
    nd.parent = parent;
    nd.leaf_player = player;
    return nd;
  };
  TreeNode root;
  root.id = 2;
  root.height = 1.0;
  root.children = {0, 1};
  EXPECT_NO_THROW(PartitionTree({leaf(0, 2, 0), leaf(1, 2, 1), root}));

  TreeNode low = root;
  low.height = 0.8;
  EXPECT_THROW(PartitionTree({leaf(0, 2, 0), leaf(1, 2, 1), low}), InvalidArgument);
  EXPECT_THROW(PartitionTree({leaf(0, 2, 0), leaf(1, 2, 0), root}), InvalidArgument);

  TreeNode unary = root;
  unary.children = {0};
  TreeNode orphan = leaf(1, 2, 1);
  orphan.parent.reset();
  EXPECT_THROW(PartitionTree({leaf(0, 2, 0), orphan, unary}), InvalidArgument);

  TreeNode lifted = leaf(0, 2, 0);
  lifted.height = 0.1;
  EXPECT_THROW(PartitionTree({lifted, leaf(1, 2, 1), root}), InvalidArgument);

  TreeNode gap = root;
  gap.id = 3;
  EXPECT_THROW(PartitionTree({leaf(0, 3, 0), leaf(1, 3, 1), gap}), InvalidArgument);
}

TEST(Tree, EqualHeightsAreSeparatedWithWarning) {
  TreeBuilder b(4);
  const int a = b.join({0, 1}, 0.5);
  const int c = b.join({2, 3}, 0.5);
  const PartitionTree t = b.build({a, c});
  ASSERT_EQ(t.warnings().size(), 1u);
  EXPECT_NE(t.node(a).height, t.node(c).height);
  EXPECT_NEAR(t.node(c).height - t.node(a).height, 1e-9, 1e-15);
}

TEST(Tree, FromPartition) {
  const Partition p = Partition::from_blocks(5, {{0, 3}, {1}, {2, 4}});
  const PartitionTree t = PartitionTree::from_partition(p);
  EXPECT_EQ(t.depth(), 2);
  EXPECT_EQ(to_string(t.cut(0.99)), to_string(p));
  EXPECT_THROW(PartitionTree::from_partition(p, 1.0), InvalidArgument);
  const PartitionTree g = PartitionTree::from_partition(Partition::grand(3));
  EXPECT_EQ(g.num_nodes(), 4);
  EXPECT_EQ(g.depth(), 1);
}

TEST(Recursive, DepthTwoTreesReproduceFlatValues) {
  Rng rng(21);
  const CoalitionalValueSpec specs[] = {
      CoalitionalValueSpec::owen(), CoalitionalValueSpec::two_step_shapley(),
      CoalitionalValueSpec::banzhaf_owen(), CoalitionalValueSpec::symmetric_banzhaf()};
  for (int k = 0; k < 60; ++k) {
    const int n = rng.integer(2, 8);
    const Game v = testing::random_noncooperative(n, 300 + k);
    const Partition p = testing::random_partition(n, 4, rng);
    if (p.num_blocks() == 1) continue;  // see GrandPartitionUsesOuterValue
    const PartitionTree t = PartitionTree::from_partition(p);
    for (const auto& spec : specs) {
      const auto r = recursive_values(t, v, spec);
      EXPECT_LE(max_abs_diff(r.leaf_values, coalitional_value(spec, v, p)), 1e-12)
          << spec.name() << " " << to_string(p);
    }
  }
}

TEST(Recursive, GrandPartitionUsesOuterValue) {
  const Game v = testing::random_noncooperative(4, 8);
  const PartitionTree t = PartitionTree::from_partition(Partition::grand(4));
  EXPECT_LE(max_abs_diff(recursive_values(t, v, CoalitionalValueSpec::owen()).leaf_values,
                         shapley(v)),
            1e-12);
  EXPECT_LE(
      max_abs_diff(recursive_values(t, v, CoalitionalValueSpec::symmetric_banzhaf()).leaf_values,
                   banzhaf(v)),
      1e-12);
}

TEST(Recursive, AdditiveFlowForEfficientSpecs) {
  Rng rng(5);
  for (int k = 0; k < 60; ++k) {
    const int n = rng.integer(2, 10);
    const PartitionTree t = testing::random_tree(n, 4, rng);
    const Game v = testing::random_noncooperative(n, 900 + k);
    for (const auto& spec :
         {CoalitionalValueSpec::owen(), CoalitionalValueSpec::two_step_shapley()}) {
      const auto r = recursive_values(t, v, spec);
      EXPECT_NEAR(r.per_node[t.root()], v(v.grand()) - v(0), 1e-12);
      for (const TreeNode& nd : t.nodes()) {
        if (nd.children.empty()) continue;
        double s = 0.0;
        for (int c : nd.children) s += r.per_node[c];
        EXPECT_NEAR(s, r.per_node[nd.id], 1e-10) << spec.name();
      }
    }
  }
}

TEST(Recursive, ThreeLevelOwenByHand) {
  // Root over A={0,1,2} and leaf 3; A over B={0,1} and leaf 2.
  TreeBuilder b(4);
  const int bb = b.join({0, 1}, 0.2);
  const int aa = b.join({bb, 2}, 0.6);
  const PartitionTree t = b.build({aa, 3});
  const Game v = Game::tabulate(4, [](Mask s) {
    return 1.0 * contains(s, 0) + 2.0 * contains(s, 3) +
           ((s & 0b0011) == 0b0011 ? 4.0 : 0.0) + ((s & 0b1100) == 0b1100 ? 8.0 : 0.0);
  });
  const auto r = recursive_values(t, v, CoalitionalValueSpec::owen());
  // Additive pieces spread by Shapley within each level: the x2*x3 term
  // splits 4/4 between A and {3}, then goes entirely to player 2 inside A.
  EXPECT_NEAR(r.per_node[aa], 1.0 + 4.0 + 4.0, 1e-12);
  EXPECT_NEAR(r.per_node[3], 2.0 + 4.0, 1e-12);
  EXPECT_NEAR(r.per_node[bb], 5.0, 1e-12);
  EXPECT_NEAR(r.per_node[2], 4.0, 1e-12);
  EXPECT_NEAR(r.leaf_values[0], 3.0, 1e-12);
  EXPECT_NEAR(r.leaf_values[1], 2.0, 1e-12);
}

TEST(Recursive, GroupExplanationSums) {
  const PartitionTree t = sample_tree();
  const Game v = testing::random_noncooperative(5, 77);
  const auto r = recursive_values(t, v, CoalitionalValueSpec::owen());
  for (double a : {0.0, 0.5, 0.9, 2.0}) {
    const auto g = group_explanation_at(t, r, a);
    ASSERT_EQ(g.nodes.size(), g.leaf_sums.size());
    for (std::size_t k = 0; k < g.nodes.size(); ++k) {
      EXPECT_NEAR(g.leaf_sums[k], g.node_values[k], 1e-12);
    }
  }
  const auto direct = tree_group_explanations(t, v, CoalitionalValueSpec::owen(), 0.7);
  EXPECT_EQ(direct.partition.num_blocks(), 3);
}

TEST(Recursive, SizeMismatchThrows) {
  EXPECT_THROW(recursive_values(sample_tree(), testing::majority3(),
                                CoalitionalValueSpec::owen()),
               InvalidArgument);
}

TEST(Export, NewickAndDot) {
  const PartitionTree t = sample_tree();
  EXPECT_EQ(to_newick(t), "((0:0.3,1:0.3):0.7,(2:0.6,3:0.6):0.4,4:1);");
  EXPECT_EQ(to_newick(t, {"a", "b", "c", "d", "e"}),
            "((a:0.3,b:0.3):0.7,(c:0.6,d:0.6):0.4,e:1);");
  const std::string dot = to_dot(t);
  EXPECT_NE(dot.find("digraph"), std::string::npos);
  EXPECT_NE(dot.find("n7 -> n5"), std::string::npos);
}

}  // namespace
}  // namespace coalex
