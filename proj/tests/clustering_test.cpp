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

#include "coalex/clustering.hpp"
#include "coalex/error.hpp"
#include "coalex/synthetic.hpp"

namespace coalex {
namespace {

TEST(AverageLinkage, TwoPairs) {
  const DissimilarityMatrix d(4, {0, 0.1, 0.8, 0.8,  //
                                  0.1, 0, 0.8, 0.8,  //
                                  0.8, 0.8, 0, 0.2,  //
                                  0.8, 0.8, 0.2, 0});
  const ClusteringResult r = average_linkage(d);
  ASSERT_EQ(r.merges.size(), 3u);
  EXPECT_EQ(r.merges[0].left, 0);
  EXPECT_EQ(r.merges[0].right, 1);
  EXPECT_EQ(r.merges[0].node, 4);
  EXPECT_DOUBLE_EQ(r.merges[0].raw_height, 0.1);
  EXPECT_EQ(r.merges[1].left, 2);
  EXPECT_EQ(r.merges[1].right, 3);
  EXPECT_DOUBLE_EQ(r.merges[2].raw_height, 0.8);
  EXPECT_EQ(r.merges[2].size, 4);
  EXPECT_FALSE(r.had_inversions);
  const PartitionTree& t = r.tree;
  EXPECT_EQ(t.root(), 6);
  EXPECT_EQ(t.node(6).height, 1.0);
  EXPECT_EQ(*t.node(6).raw_height, 0.8);
  EXPECT_DOUBLE_EQ(t.node(4).height, 0.1);
  EXPECT_EQ(to_string(t.cut(0.7)), to_string(Partition::from_blocks(4, {{0, 1}, {2, 3}})));
  EXPECT_EQ(to_string(t.cut(0.15)), to_string(Partition::from_blocks(4, {{0, 1}, {2}, {3}})));
}

TEST(AverageLinkage, UsesSizeWeightedAverages) {
  // After {0,1} merges, d({0,1},2) = (0.5 + 0.7) / 2 and d({0,1},3) = 0.65.
  const DissimilarityMatrix d(4, {0, 0.1, 0.5, 0.6,  //
                                  0.1, 0, 0.7, 0.7,  //
                                  0.5, 0.7, 0, 0.9,  //
                                  0.6, 0.7, 0.9, 0});
  const ClusteringResult r = average_linkage(d);
  EXPECT_DOUBLE_EQ(r.merges[1].raw_height, 0.6);
  EXPECT_EQ(r.merges[1].left, 4);
  EXPECT_EQ(r.merges[1].right, 2);
  // d({0,1,2},3) = (0.6 + 0.7 + 0.9) / 3.
  EXPECT_NEAR(r.merges[2].raw_height, 2.2 / 3.0, 1e-15);
}

TEST(AverageLinkage, TiesGoToLowestIndices) {
  std::vector<double> v(25, 0.5);
  for (int i = 0; i < 5; ++i) v[i * 5 + i] = 0.0;
  const ClusteringResult r = average_linkage(DissimilarityMatrix(5, v));
  EXPECT_EQ(r.merges[0].left, 0);
  EXPECT_EQ(r.merges[0].right, 1);
  EXPECT_EQ(r.merges[1].left, 5);
  EXPECT_EQ(r.merges[1].right, 2);
}

TEST(AverageLinkage, ZeroDistancesAreLifted) {
  const ClusteringResult r = average_linkage(DissimilarityMatrix(3));
  EXPECT_DOUBLE_EQ(r.tree.node(3).height, 1e-9);
  EXPECT_EQ(*r.tree.node(3).raw_height, 0.0);
  EXPECT_EQ(r.tree.node(4).height, 1.0);
  // the root is pinned at height 1, so 0.5 still splits off player 2
  EXPECT_EQ(r.tree.cut(0.5), Partition::from_blocks(3, {{0, 1}, {2}}));
  EXPECT_EQ(r.tree.cut(1.5).num_blocks(), 1);
  EXPECT_EQ(r.tree.cut(1e-10).num_blocks(), 3);
}

TEST(AverageLinkage, SingleFeature) {
  const PartitionTree t = average_linkage_cluster(DissimilarityMatrix(1));
  EXPECT_EQ(t.num_players(), 1);
  EXPECT_EQ(t.num_nodes(), 1);
  EXPECT_THROW(average_linkage(DissimilarityMatrix(0)), InvalidArgument);
}

TEST(AverageLinkage, RecoversMicTestBlocks) {
  const auto fam = make_family("mictest");
  const Dataset data = fam->sample(10000, 11);
  const PartitionTree t = average_linkage_cluster(dissimilarity_matrix(data, {}, 4));
  EXPECT_EQ(to_string(t.cut(0.7)),
            to_string(Partition::from_blocks(7, {{0, 1, 2, 3}, {4}, {5, 6}})));
  for (const TreeNode& nd : t.nodes()) {
    if (nd.parent) {
      EXPECT_LT(nd.height, t.node(*nd.parent).height);
    }
  }
}

}  // namespace
}  // namespace coalex
