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

#ifndef COALEX_GAME_HPP_
#define COALEX_GAME_HPP_

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "coalex/player_set.hpp"

namespace coalex {

// A set function v: 2^N -> R over players 0..n-1. Either a dense table of
// 2^n values (n <= kDenseCap) or a lazily evaluated function. Immutable and
// cheap to copy.
class Game {
 public:
  using Evaluator = std::function<double(Mask)>;

  Game() = default;

  // values[s] = v(s) for every mask s < 2^n.
  static Game dense(int n, std::vector<double> values);
  // Evaluates `f` on every coalition once and stores the table.
  static Game tabulate(int n, const Evaluator& f);
  static Game lazy(int n, Evaluator f);

  int size() const { return n_; }
  Mask grand() const { return full_mask(n_); }

  double operator()(Mask s) const {
    return table_ ? (*table_)[s] : (*eval_)(s);
  }

  double empty_value() const { return empty_; }
  bool is_cooperative() const { return empty_ == 0.0; }
  bool is_dense() const { return table_ != nullptr; }

  // Dense games only.
  std::span<const double> table() const;

  // Dense copy of this game; throws if n exceeds kDenseCap.
  Game materialize() const;

 private:
  int n_ = 0;
  double empty_ = 0.0;
  std::shared_ptr<const std::vector<double>> table_;
  std::shared_ptr<const Evaluator> eval_;
};

// A partition of {0..n-1} into nonempty blocks. Blocks are ordered by their
// smallest player.
class Partition {
 public:
  Partition() = default;

  static Partition from_masks(int n, std::vector<Mask> blocks);
  static Partition from_blocks(int n, const std::vector<std::vector<int>>& blocks);
  static Partition singletons(int n);
  static Partition grand(int n);

  int num_players() const { return n_; }
  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  Mask block(int j) const { return blocks_[j]; }
  const std::vector<Mask>& blocks() const { return blocks_; }
  int block_of(int i) const { return block_of_[i]; }
  std::vector<std::vector<int>> to_indices() const;

  // unions[a] = union of the blocks selected by quotient coalition a.
  std::vector<Mask> union_table() const;

  // True when every block of `finer` lies inside a block of this partition.
  bool is_coarsening_of(const Partition& finer) const;

  bool operator==(const Partition& other) const {
    return n_ == other.n_ && blocks_ == other.blocks_;
  }

 private:
  int n_ = 0;
  std::vector<Mask> blocks_;
  std::vector<int> block_of_;
};

std::string to_string(const Partition& p);

// v - v(empty).
Game centered(const Game& v);

// Sets v(empty) to 0 and leaves every other coalition alone.
Game project(const Game& v);

// v^P(A) = v(union of the blocks in A), a game on the m blocks.
Game quotient_game(const Game& v, const Partition& p);

// Game on the blocks in which block j is replaced by T (T inside block j):
// A -> v(U_A) if j not in A, v(U_{A\j} + T) otherwise.
Game modified_quotient_game(const Game& v, const Partition& p, int j, Mask t);

// Block game used by the two-step Shapley family; T nonempty inside block j:
// A -> (|T|/|S_j|) v^P(A) + |A| (v(T) - (|T|/|S_j|) v^P({j})).
Game tsh_intermediate_game(const Game& v, const Partition& p, int j, Mask t);

// The restriction of v to the players in `s`, relabelled 0..|s|-1 in
// increasing order.
Game subgame(const Game& v, Mask s);

// Checks that `carrier` is a carrier of v (v(S) = v(S & carrier) for all S)
// and returns v restricted to it. Dense games only.
Game restrict_to_carrier(const Game& v, Mask carrier, double tol = 1e-12);

// Unanimity game u_T(S) = 1 if T is inside S.
Game unanimity_game(int n, Mask t);

}  // namespace coalex

#endif  // COALEX_GAME_HPP_
