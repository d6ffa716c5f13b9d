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

#ifndef COALEX_ORACLES_REFERENCE_ORACLES_HPP_
#define COALEX_ORACLES_REFERENCE_ORACLES_HPP_

// Slow, independent implementations used to check the library. Nothing here
// reuses library code apart from the Game container.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coalex/coalitional.hpp"
#include "coalex/game.hpp"

namespace coalex::oracle {

using Blocks = std::vector<std::vector<int>>;

// Average of marginal contributions over all n! orders; n <= 8.
std::vector<double> shapley_by_permutations(const Game& v);
// Plain sum of marginal contributions times 2^(1-n).
std::vector<double> banzhaf_by_enumeration(const Game& v);

// Direct double sums over (outer subset of other blocks, inner subset of
// the own block) with the appropriate weights.
std::vector<double> owen_double_sum(const Game& v, const Blocks& p);
std::vector<double> banzhaf_owen_double_sum(const Game& v, const Blocks& p);
std::vector<double> symmetric_banzhaf_double_sum(const Game& v, const Blocks& p);
// Shapley of the restricted block game plus an even share of the block's
// quotient surplus.
std::vector<double> two_step_shapley_direct(const Game& v, const Blocks& p);
// Owen value as the average over block-consistent orders; n <= 8.
std::vector<double> owen_by_permutations(const Game& v, const Blocks& p);

std::vector<double> reference_value(CoalitionalKind kind, const Game& v, const Blocks& p);

// Every set partition of {0..n-1} into at most max_blocks blocks.
std::vector<Blocks> enumerate_partitions(int n, int max_blocks);

// Exhaustive MIC search for n <= 30 samples: one axis equipartitioned into
// l bins (ties to the lower bin), every split of the other axis between
// distinct values into at most k columns, k <= l, k*l < B(n), both
// orientations. max_k * max_l <= 16.
double mic_brute_force(const std::vector<double>& x, const std::vector<double>& y, int max_k,
                       int max_l, double b_exponent = 0.6);

struct OracleWitness {
  Game game;
  Blocks partition;
  int player = -1;
  std::string note;
};

struct OracleReport {
  double max_abs_deviation = 0.0;
  std::size_t comparisons = 0;
  std::optional<OracleWitness> witness;  // worst case seen
};

// Random games with 2..max_n players, every partition into at most 4 blocks:
// direct formula against the two-step evaluator and against the matching
// reference above, plus the quotient identity for specs that claim it.
// Custom specs are compared against the reference named by their
// (outer, inner, intermediate) triple when one exists.
OracleReport crosscheck(const CoalitionalValueSpec& spec, int trials, std::uint64_t seed,
                        int max_n = 8);

std::string to_json(const OracleReport& r);

}  // namespace coalex::oracle

#endif  // COALEX_ORACLES_REFERENCE_ORACLES_HPP_
