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

#ifndef COALEX_MIC_HPP_
#define COALEX_MIC_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace coalex {

struct MicConfig {
  // B(n) = ceil(n^b_exponent), at least 4.
  double b_exponent = 0.6;
  // Caps the number of candidate boundaries at factor * (column budget).
  int max_clumps_factor = 5;
  // Below this many clumps no superclumping is applied, so small samples are
  // optimized exactly.
  int exact_clump_limit = 32;
  // Optional cap on both grid dimensions; 0 means no cap.
  int max_grid_dim = 0;
};

int mic_grid_bound(std::size_t n, const MicConfig& cfg = {});

// Joint count table, rows x columns.
using CountTable = std::vector<std::vector<double>>;

// Mutual information of the table in bits.
double discrete_mutual_information(const CountTable& counts);

// Bin index of every sample when `values` is split into `bins` rank-equal
// bins; equal values share the bin of their first rank.
std::vector<int> equipartition(std::span<const double> values, int bins);

// MIC_e estimate in [0, 1]. Symmetric in (x, y).
double mic_e(std::span<const double> x, std::span<const double> y,
             const MicConfig& cfg = {});

class Dataset;

// Symmetric matrix with zero diagonal and entries in [0, 1].
class DissimilarityMatrix {
 public:
  DissimilarityMatrix() = default;
  explicit DissimilarityMatrix(int n, std::vector<double> values = {});

  int size() const { return n_; }
  double operator()(int i, int j) const { return d_[i * n_ + j]; }
  void set(int i, int j, double value);
  const std::vector<double>& values() const { return d_; }

  std::vector<std::string> labels;

 private:
  int n_ = 0;
  std::vector<double> d_;
};

// 1 - mic_e over all column pairs.
DissimilarityMatrix dissimilarity_matrix(const Dataset& data, const MicConfig& cfg = {},
                                         int workers = 1);

void write_dissimilarity_csv(const DissimilarityMatrix& d, const std::string& path);
DissimilarityMatrix read_dissimilarity_csv(const std::string& path);

}  // namespace coalex

#endif  // COALEX_MIC_HPP_
