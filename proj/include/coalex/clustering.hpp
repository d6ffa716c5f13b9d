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

#ifndef COALEX_CLUSTERING_HPP_
#define COALEX_CLUSTERING_HPP_

#include <string>
#include <vector>

#include "coalex/mic.hpp"
#include "coalex/partition_tree.hpp"

namespace coalex {

struct Merge {
  int left = 0;   // node ids
  int right = 0;
  int node = 0;   // id of the new node
  double raw_height = 0.0;
  int size = 0;
};

struct ClusteringResult {
  PartitionTree tree;
  std::vector<Merge> merges;
  bool had_inversions = false;
  std::vector<std::string> notes;
};

// Group-average agglomerative clustering. Leaves are nodes 0..n-1 and merge t
// creates node n+t. Ties between equal dissimilarities go to the pair with
// the lowest indices. Internal heights are the raw merge heights (kept in
// raw_height), lifted by 1e-9 where needed to stay strictly above the
// children, kept below 1 for non-root nodes; the root sits at 1.
ClusteringResult average_linkage(const DissimilarityMatrix& d);

PartitionTree average_linkage_cluster(const DissimilarityMatrix& d);

}  // namespace coalex

#endif  // COALEX_CLUSTERING_HPP_
