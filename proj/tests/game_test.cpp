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
#include "coalex/game.hpp"
#include "coalex/io.hpp"
#include "test_util.hpp"

namespace coalex {
namespace {

using testing::majority3;

TEST(PlayerSet, BitHelpers) {
  EXPECT_EQ(cardinality(0b1011), 3);
  EXPECT_EQ(full_mask(3), Mask{7});
  EXPECT_EQ(members(0b101), (std::vector<int>{0, 2}));
  EXPECT_TRUE(contains(0b100, 2));
  EXPECT_FALSE(contains(0b100, 1));
}

TEST(Game, DenseTableAndEmptyValue) {
  const Game v = Game::dense(2, {1, 2, 3, 5});
  EXPECT_EQ(v.size(), 2);
  EXPECT_DOUBLE_EQ(v.empty_value(), 1.0);
  EXPECT_FALSE(v.is_cooperative());
  EXPECT_DOUBLE_EQ(v(0b11), 5.0);
  EXPECT_THROW(Game::dense(2, {1, 2, 3}), InvalidArgument);
}

TEST(Game, LazyGameMaterializes) {
  const Game v = Game::lazy(3, [](Mask s) { return static_cast<double>(cardinality(s)); });
  EXPECT_FALSE(v.is_dense());
  const Game d = v.materialize();
  EXPECT_TRUE(d.is_dense());
  for (Mask s = 0; s < 8; ++s) EXPECT_DOUBLE_EQ(d(s), cardinality(s));
}

TEST(Project, DropsEmptySetValue) {
  const Game p = project(Game::dense(2, {1, 2, 3, 5}));
  const std::vector<double> want{0, 2, 3, 5};
  for (Mask s = 0; s < 4; ++s) EXPECT_DOUBLE_EQ(p(s), want[s]);
  EXPECT_TRUE(p.is_cooperative());
}

TEST(Project, CooperativeGameIsFixed) {
  const Game v = Game::dense(2, {0, 1, 2, 4});
  const Game p = project(v);
  for (Mask s = 0; s < 4; ++s) EXPECT_DOUBLE_EQ(p(s), v(s));
}

TEST(Project, ConstantGame) {
  const Game p = project(Game::tabulate(2, [](Mask) { return 5.0; }));
  const std::vector<double> want{0, 5, 5, 5};
  for (Mask s = 0; s < 4; ++s) EXPECT_DOUBLE_EQ(p(s), want[s]);
}

TEST(Partition, ValidatesAndIndexes) {
  const Partition p = Partition::from_blocks(4, {{2, 3}, {0}, {1}});
  EXPECT_EQ(p.num_blocks(), 3);
  // Blocks are ordered by their smallest player.
  EXPECT_EQ(p.block(0), Mask{1});
  EXPECT_EQ(p.block_of(3), 2);
  EXPECT_THROW(Partition::from_blocks(3, {{0, 1}, {1, 2}}), InvalidArgument);
  EXPECT_THROW(Partition::from_blocks(3, {{0, 1}}), InvalidArgument);
  EXPECT_THROW(Partition::from_blocks(3, {{0, 1, 2}, {}}), InvalidArgument);
  EXPECT_TRUE(Partition::singletons(4).is_coarsening_of(Partition::singletons(4)));
  EXPECT_TRUE(p.is_coarsening_of(Partition::singletons(4)));
  EXPECT_FALSE(Partition::singletons(4).is_coarsening_of(p));
}

TEST(QuotientGame, MajorityGame) {
  const Game q = quotient_game(majority3(), Partition::from_blocks(3, {{0, 1}, {2}}));
  ASSERT_EQ(q.size(), 2);
  const std::vector<double> want{0, 1, 0, 1};
  for (Mask a = 0; a < 4; ++a) EXPECT_DOUBLE_EQ(q(a), want[a]);
}

TEST(QuotientGame, GrandCoalitionAndSingletons) {
  const Game v = testing::random_noncooperative(4, 3);
  const Game g = quotient_game(v, Partition::grand(4));
  ASSERT_EQ(g.size(), 1);
  EXPECT_DOUBLE_EQ(g(1), v(15));
  EXPECT_DOUBLE_EQ(g(0), v(0));
  const Game s = quotient_game(v, Partition::singletons(4));
  for (Mask a = 0; a < 16; ++a) EXPECT_DOUBLE_EQ(s(a), v(a));
}

TEST(QuotientGame, KeepsEndpoints) {
  Rng rng(17);
  for (int t = 0; t < 50; ++t) {
    const int n = rng.integer(1, 7);
    const Game v = testing::random_noncooperative(n, 100 + t);
    const Partition p = testing::random_partition(n, 3, rng);
    const Game q = quotient_game(v, p);
    EXPECT_DOUBLE_EQ(q(q.grand()), v(v.grand()));
    EXPECT_DOUBLE_EQ(q(0), v(0));
  }
}

TEST(QuotientGame, RejectsMismatchedPartition) {
  EXPECT_THROW(quotient_game(majority3(), Partition::singletons(4)), InvalidArgument);
}

TEST(ModifiedQuotient, MajorityGameHandValues) {
  const Game v = majority3();
  const Partition p = Partition::from_blocks(3, {{0, 1}, {2}});
  const Game g = modified_quotient_game(v, p, 0, 0b001);
  EXPECT_DOUBLE_EQ(g(0b01), v(0b001));
  EXPECT_DOUBLE_EQ(g(0b10), v(0b100));
  EXPECT_DOUBLE_EQ(g(0b11), v(0b101));
  EXPECT_DOUBLE_EQ(g(0b01), 0.0);
  EXPECT_DOUBLE_EQ(g(0b10), 0.0);
  EXPECT_DOUBLE_EQ(g(0b11), 1.0);
}

TEST(ModifiedQuotient, FullBlockEqualsQuotientAndEmptyBlockDropsIt) {
  Rng rng(5);
  for (int t = 0; t < 30; ++t) {
    const int n = rng.integer(2, 7);
    const Game v = testing::random_noncooperative(n, 300 + t);
    const Partition p = testing::random_partition(n, 4, rng);
    const Game q = quotient_game(v, p);
    for (int j = 0; j < p.num_blocks(); ++j) {
      const Game full = modified_quotient_game(v, p, j, p.block(j));
      const Game none = modified_quotient_game(v, p, j, 0);
      for (Mask a = 0; a <= q.grand(); ++a) {
        EXPECT_DOUBLE_EQ(full(a), q(a));
        EXPECT_DOUBLE_EQ(none(a), q(a & ~bit(j)));
      }
    }
  }
}

TEST(ModifiedQuotient, GrandPartitionReturnsSubsetValue) {
  const Game v = testing::random_noncooperative(4, 8);
  for (Mask t = 0; t < 16; ++t) {
    EXPECT_DOUBLE_EQ(modified_quotient_game(v, Partition::grand(4), 0, t)(1), v(t));
  }
}

TEST(ModifiedQuotient, RejectsSubsetOutsideBlock) {
  const Partition p = Partition::from_blocks(3, {{0, 1}, {2}});
  EXPECT_THROW(modified_quotient_game(majority3(), p, 0, 0b100), InvalidArgument);
}

TEST(TshIntermediate, MajorityGameHandValues) {
  const Partition p = Partition::from_blocks(3, {{0, 1}, {2}});
  const Game g = tsh_intermediate_game(majority3(), p, 0, 0b001);
  EXPECT_DOUBLE_EQ(g(0b01), 0.0);
  EXPECT_DOUBLE_EQ(g(0b11), -0.5);
}

TEST(TshIntermediate, FullBlockEqualsQuotient) {
  Rng rng(9);
  for (int t = 0; t < 30; ++t) {
    const int n = rng.integer(2, 7);
    const Game v = testing::random_noncooperative(n, 500 + t);
    const Partition p = testing::random_partition(n, 4, rng);
    const Game q = quotient_game(v, p);
    for (int j = 0; j < p.num_blocks(); ++j) {
      const Game g = tsh_intermediate_game(v, p, j, p.block(j));
      for (Mask a = 1; a <= q.grand(); ++a) EXPECT_NEAR(g(a), q(a), 1e-12);
    }
  }
}

TEST(TshIntermediate, RejectsEmptySubset) {
  const Partition p = Partition::from_blocks(3, {{0, 1}, {2}});
  EXPECT_THROW(tsh_intermediate_game(majority3(), p, 0, 0), InvalidArgument);
}

TEST(RestrictToCarrier, NullPlayerDropped) {
  const Game v = Game::tabulate(2, [](Mask s) { return contains(s, 0) ? 1.0 : 0.0; });
  const Game r = restrict_to_carrier(v, 0b01);
  ASSERT_EQ(r.size(), 1);
  EXPECT_DOUBLE_EQ(r(0), 0.0);
  EXPECT_DOUBLE_EQ(r(1), 1.0);
}

TEST(RestrictToCarrier, FullSetIsIdentity) {
  const Game v = testing::random_noncooperative(3, 4);
  const Game r = restrict_to_carrier(v, 0b111);
  for (Mask s = 0; s < 8; ++s) EXPECT_DOUBLE_EQ(r(s), v(s));
}

TEST(RestrictToCarrier, ViolationNamesWitness) {
  const Game v = Game::dense(2, {0, 0, 1, 1});
  try {
    restrict_to_carrier(v, 0b01);
    FAIL() << "expected an error";
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("S = {1}"), std::string::npos) << e.what();
  }
}

TEST(Subgame, RelabelsMembers) {
  const Game v = testing::random_noncooperative(4, 12);
  const Game s = subgame(v, 0b1010);
  ASSERT_EQ(s.size(), 2);
  EXPECT_DOUBLE_EQ(s(0b01), v(0b0010));
  EXPECT_DOUBLE_EQ(s(0b10), v(0b1000));
  EXPECT_DOUBLE_EQ(s(0b11), v(0b1010));
}

TEST(UnanimityGame, Values) {
  const Game u = unanimity_game(3, 0b011);
  EXPECT_DOUBLE_EQ(u(0b011), 1.0);
  EXPECT_DOUBLE_EQ(u(0b111), 1.0);
  EXPECT_DOUBLE_EQ(u(0b101), 0.0);
}

TEST(GameJson, RoundTrip) {
  const Game v = Game::dense(2, {1, 2, 3, 5});
  const Json j = game_to_json(v);
  EXPECT_EQ(j["n"], 2);
  const Game back = game_from_json(j);
  for (Mask s = 0; s < 4; ++s) EXPECT_DOUBLE_EQ(back(s), v(s));
  EXPECT_THROW(game_from_json(Json{{"n", 2}, {"values", {1, 2}}}), InputError);
}

}  // namespace
}  // namespace coalex
