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

#include "coalex/game.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "coalex/error.hpp"

namespace coalex {

std::vector<int> members(Mask s) {
  std::vector<int> out;
  out.reserve(cardinality(s));
  while (s != 0) {
    out.push_back(std::countr_zero(s));
    s &= s - 1;
  }
  return out;
}

Mask mask_of(std::span<const int> players) {
  Mask m = 0;
  for (int i : players) {
    if (i < 0 || i >= kMaxPlayers) throw_invalid("player index out of range");
    m |= bit(i);
  }
  return m;
}

std::vector<Mask> deposit_table(std::span<const int> positions) {
  const std::size_t k = positions.size();
  std::vector<Mask> out(std::size_t{1} << k, 0);
  for (std::size_t a = 1; a < out.size(); ++a) {
    const int low = std::countr_zero(a);
    out[a] = out[a & (a - 1)] | bit(positions[low]);
  }
  return out;
}

namespace {

void check_size(int n) {
  if (n < 0 || n > kMaxPlayers) throw_invalid("player count out of range");
}

void check_dense_size(int n) {
  if (n < 0 || n > kDenseCap) {
    throw_invalid("dense games are limited to " + std::to_string(kDenseCap) +
                  " players, got " + std::to_string(n));
  }
}

}  // namespace

Game Game::dense(int n, std::vector<double> values) {
  check_dense_size(n);
  if (values.size() != (std::size_t{1} << n)) {
    throw_invalid("dense game table must have 2^n entries");
  }
  for (double x : values) {
    if (!std::isfinite(x)) throw_invalid("game values must be finite");
  }
  Game g;
  g.n_ = n;
  g.empty_ = values[0];
  g.table_ = std::make_shared<const std::vector<double>>(std::move(values));
  return g;
}

Game Game::tabulate(int n, const Evaluator& f) {
  check_dense_size(n);
  std::vector<double> values(std::size_t{1} << n);
  for (std::size_t s = 0; s < values.size(); ++s) values[s] = f(s);
  return dense(n, std::move(values));
}

Game Game::lazy(int n, Evaluator f) {
  check_size(n);
  if (!f) throw_invalid("lazy game needs an evaluator");
  Game g;
  g.n_ = n;
  g.eval_ = std::make_shared<const Evaluator>(std::move(f));
  g.empty_ = (*g.eval_)(0);
  return g;
}

std::span<const double> Game::table() const {
  if (!table_) throw_invalid("game is not stored densely");
  return {table_->data(), table_->size()};
}

Game Game::materialize() const {
  if (table_) return *this;
  return tabulate(n_, *eval_);
}

Partition Partition::from_masks(int n, std::vector<Mask> blocks) {
  check_size(n);
  Mask seen = 0;
  for (Mask b : blocks) {
    if (b == 0) throw_invalid("partition blocks must be nonempty");
    if ((b & ~full_mask(n)) != 0) throw_invalid("partition block outside player range");
    if ((b & seen) != 0) throw_invalid("partition blocks overlap");
    seen |= b;
  }
  if (seen != full_mask(n)) throw_invalid("partition does not cover every player");
  std::sort(blocks.begin(), blocks.end(), [](Mask a, Mask b) {
    return std::countr_zero(a) < std::countr_zero(b);
  });
  Partition p;
  p.n_ = n;
  p.blocks_ = std::move(blocks);
  p.block_of_.assign(n, -1);
  for (int j = 0; j < p.num_blocks(); ++j) {
    for (int i : members(p.blocks_[j])) p.block_of_[i] = j;
  }
  return p;
}

Partition Partition::from_blocks(int n, const std::vector<std::vector<int>>& blocks) {
  std::vector<Mask> masks;
  masks.reserve(blocks.size());
  for (const auto& b : blocks) {
    Mask m = 0;
    for (int i : b) {
      if (i < 0 || i >= n) {
        throw_invalid("partition index " + std::to_string(i) + " out of range");
      }
      if (contains(m, i)) throw_invalid("duplicate index in partition block");
      m |= bit(i);
    }
    masks.push_back(m);
  }
  return from_masks(n, std::move(masks));
}

Partition Partition::singletons(int n) {
  std::vector<Mask> masks(n);
  for (int i = 0; i < n; ++i) masks[i] = bit(i);
  return from_masks(n, std::move(masks));
}

Partition Partition::grand(int n) {
  if (n == 0) return from_masks(0, {});
  return from_masks(n, {full_mask(n)});
}

std::vector<std::vector<int>> Partition::to_indices() const {
  std::vector<std::vector<int>> out;
  out.reserve(blocks_.size());
  for (Mask b : blocks_) out.push_back(members(b));
  return out;
}

std::vector<Mask> Partition::union_table() const {
  check_dense_size(num_blocks());
  std::vector<Mask> unions(std::size_t{1} << num_blocks(), 0);
  for (std::size_t a = 1; a < unions.size(); ++a) {
    const int low = std::countr_zero(a);
    unions[a] = unions[a & (a - 1)] | blocks_[low];
  }
  return unions;
}

bool Partition::is_coarsening_of(const Partition& finer) const {
  if (finer.n_ != n_) return false;
  for (Mask b : finer.blocks_) {
    if ((b & blocks_[block_of_[std::countr_zero(b)]]) != b) return false;
  }
  return true;
}

std::string to_string(const Partition& p) {
  std::ostringstream out;
  out << '[';
  for (int j = 0; j < p.num_blocks(); ++j) {
    if (j) out << ',';
    out << '[';
    const auto m = members(p.block(j));
    for (std::size_t k = 0; k < m.size(); ++k) {
      if (k) out << ',';
      out << m[k];
    }
    out << ']';
  }
  out << ']';
  return out.str();
}

Game centered(const Game& v) {
  const double e = v.empty_value();
  if (v.is_dense()) {
    auto t = v.table();
    std::vector<double> out(t.begin(), t.end());
    for (double& x : out) x -= e;
    out[0] = 0.0;
    return Game::dense(v.size(), std::move(out));
  }
  if (e == 0.0) return v;
  return Game::lazy(v.size(), [v, e](Mask s) { return s == 0 ? 0.0 : v(s) - e; });
}

Game project(const Game& v) {
  if (v.empty_value() == 0.0) return v;
  if (v.is_dense()) {
    auto t = v.table();
    std::vector<double> out(t.begin(), t.end());
    out[0] = 0.0;
    return Game::dense(v.size(), std::move(out));
  }
  return Game::lazy(v.size(), [v](Mask s) { return s == 0 ? 0.0 : v(s); });
}

Game quotient_game(const Game& v, const Partition& p) {
  if (p.num_players() != v.size()) throw_invalid("partition and game sizes differ");
  auto unions = p.union_table();
  std::vector<double> out(unions.size());
  for (std::size_t a = 0; a < unions.size(); ++a) out[a] = v(unions[a]);
  return Game::dense(p.num_blocks(), std::move(out));
}

namespace {

void check_block_subset(const Game& v, const Partition& p, int j, Mask t) {
  if (p.num_players() != v.size()) throw_invalid("partition and game sizes differ");
  if (j < 0 || j >= p.num_blocks()) throw_invalid("block index out of range");
  if ((t & ~p.block(j)) != 0) throw_invalid("T must lie inside block j");
}

}  // namespace

Game modified_quotient_game(const Game& v, const Partition& p, int j, Mask t) {
  check_block_subset(v, p, j, t);
  auto unions = p.union_table();
  const Mask bj = bit(j);
  std::vector<double> out(unions.size());
  for (std::size_t a = 0; a < unions.size(); ++a) {
    out[a] = (a & bj) ? v(unions[a & ~bj] | t) : v(unions[a]);
  }
  return Game::dense(p.num_blocks(), std::move(out));
}

Game tsh_intermediate_game(const Game& v, const Partition& p, int j, Mask t) {
  check_block_subset(v, p, j, t);
  if (t == 0) throw_invalid("T must be nonempty");
  auto unions = p.union_table();
  const double ratio =
      static_cast<double>(cardinality(t)) / cardinality(p.block(j));
  const double shift = v(t) - ratio * v(p.block(j));
  std::vector<double> out(unions.size());
  for (std::size_t a = 0; a < unions.size(); ++a) {
    out[a] = ratio * v(unions[a]) + cardinality(a) * shift;
  }
  return Game::dense(p.num_blocks(), std::move(out));
}

Game subgame(const Game& v, Mask s) {
  if ((s & ~v.grand()) != 0) throw_invalid("subgame players outside game");
  const auto pos = members(s);
  const int k = static_cast<int>(pos.size());
  if (k <= kDenseCap) {
    auto dep = deposit_table(pos);
    std::vector<double> out(dep.size());
    for (std::size_t a = 0; a < dep.size(); ++a) out[a] = v(dep[a]);
    return Game::dense(k, std::move(out));
  }
  return Game::lazy(k, [v, pos](Mask a) { return v(deposit(a, pos)); });
}

Game restrict_to_carrier(const Game& v, Mask carrier, double tol) {
  if ((carrier & ~v.grand()) != 0) throw_invalid("carrier outside player range");
  // Lazy games are trusted.
  if (v.is_dense()) {
    auto t = v.table();
    for (std::size_t s = 0; s < t.size(); ++s) {
      if (std::abs(t[s] - t[s & carrier]) > tol) {
        std::string set;
        for (int i : members(s)) set += (set.empty() ? "" : ",") + std::to_string(i);
        throw_invalid("not a carrier: v(S) != v(S & T) for S = {" + set + "}");
      }
    }
  }
  return subgame(v, carrier);
}

Game unanimity_game(int n, Mask t) {
  check_dense_size(n);
  return Game::tabulate(n, [t](Mask s) { return (s & t) == t ? 1.0 : 0.0; });
}

}  // namespace coalex
