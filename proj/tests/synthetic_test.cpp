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

#include <cmath>

#include "coalex/error.hpp"
#include "coalex/synthetic.hpp"

namespace coalex {
namespace {

TEST(LatentLinear, SampleCovarianceAndDeterminism) {
  const auto fam = LatentLinearFamily::correlated_pair(0.6);
  const Dataset a = fam.sample(40000, 5);
  const Dataset b = fam.sample(40000, 5);
  EXPECT_EQ(a.values(), b.values());
  EXPECT_NE(a.values(), fam.sample(40000, 6).values());
  EXPECT_EQ(a.names(), (std::vector<std::string>{"x1", "x2", "x3"}));
  const Eigen::MatrixXd& s = fam.gaussian().covariance();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double m = 0.0;
      for (std::size_t r = 0; r < a.rows(); ++r) m += a(r, i) * a(r, j);
      m /= static_cast<double>(a.rows());
      EXPECT_NEAR(m, s(i, j), 0.03) << i << "," << j;
    }
  }
  EXPECT_NEAR(s(0, 1), 0.6, 1e-15);
  EXPECT_NEAR(s(1, 1), 1.0, 1e-15);
}

TEST(LatentLinear, ConditionalAndMarginalGamesForProduct) {
  const double rho = 0.4;
  const auto fam = LatentLinearFamily::correlated_pair(rho);
  const auto f = PolynomialModel::parse("x2*x3", 3);
  const std::vector<double> x{1.5, -0.7, 2.0};
  const Game ce = fam.conditional_game(x, f);
  const Game me = fam.marginal_population_game(x, f);
  const double x1x3 = x[0] * x[2], x2x3 = x[1] * x[2];
  const std::vector<double> want_ce{0, 0, 0, 0, 0, rho * x1x3, x2x3, x2x3};
  const std::vector<double> want_me{0, 0, 0, 0, 0, 0, x2x3, x2x3};
  for (Mask s = 0; s < 8; ++s) {
    EXPECT_NEAR(ce(s), want_ce[s], 1e-12) << s;
    EXPECT_NEAR(me(s), want_me[s], 1e-12) << s;
  }
}

TEST(LatentLinear, MonteCarloWithinStandardErrors) {
  const auto fam = LatentLinearFamily::near_duplicates(0.3);
  const auto f = PolynomialModel::parse("x1*x2 + 2*x3 - x1^2 + 0.5", 3);
  const std::vector<double> x{0.3, -0.2, 1.1};
  const Game exact = fam.conditional_game(x, f);
  const MonteCarloGame mc = fam.conditional_game_mc(x, f, 20000, 9);
  for (Mask s = 0; s < 8; ++s) {
    if (s == 7) {
      EXPECT_EQ(mc.std_error[s], 0.0);
    } else {
      EXPECT_GT(mc.std_error[s], 0.0);
    }
    EXPECT_LE(std::abs(mc.game(s) - exact(s)), 4.0 * mc.std_error[s] + 1e-12) << s;
  }
}

TEST(LatentLinear, NonQuadraticModelsAreUnsupported) {
  const auto fam = LatentLinearFamily::correlated_pair(0.2);
  const auto r = RectangleModel::parse("1:0:1", 3);
  const std::vector<double> x{0.5, 0.5, 0.5};
  EXPECT_THROW(fam.conditional_game(x, r), Unsupported);
  EXPECT_THROW(fam.marginal_population_game(x, r), Unsupported);
  EXPECT_NO_THROW(fam.conditional_game_mc(x, r, 100, 1));
}

TEST(LatentLinear, RandomBlocksAreIndependentAcrossBlocks) {
  const auto fam = LatentLinearFamily::random_blocks({2, 3, 1}, 4);
  EXPECT_EQ(fam.dimension(), 6);
  const Eigen::MatrixXd& s = fam.gaussian().covariance();
  const int block[] = {0, 0, 1, 1, 1, 2};
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      if (block[i] != block[j]) {
        EXPECT_EQ(s(i, j), 0.0);
      } else {
        EXPECT_GT(std::abs(s(i, j)), 0.2);
      }
    }
  }
  EXPECT_EQ(LatentLinearFamily::random_blocks({2, 3, 1}, 4).gaussian().covariance(), s);
}

TEST(LatentLinear, RejectsBadParameters) {
  EXPECT_THROW(LatentLinearFamily::correlated_pair(1.0), InvalidArgument);
  EXPECT_THROW(LatentLinearFamily::near_duplicates(0.0), InvalidArgument);
}

TEST(MicTest, SampleShape) {
  const MicTestFamily fam;
  const Dataset d = fam.sample(5000, 3);
  EXPECT_EQ(d.cols(), 7u);
  EXPECT_EQ(d.names(), fam.feature_names());
  double resid = 0.0, radius = 0.0;
  for (std::size_t r = 0; r < d.rows(); ++r) {
    EXPECT_LT(std::abs(d(r, 0)), 4 * M_PI);
    EXPECT_GT(d(r, 4), 0.0);
    EXPECT_LT(d(r, 4), 10.0);
    resid += std::pow(d(r, 1) - d(r, 0) * d(r, 0), 2);
    radius += std::hypot(d(r, 5), d(r, 6));
  }
  EXPECT_NEAR(resid / 5000, 1.0, 0.1);
  EXPECT_NEAR(radius / 5000, 2.0, 0.05);
}

TEST(Pedagogical, ResponseAndSupport) {
  const PedagogicalFamily fam(0.05);
  const Dataset d = fam.sample_with_response(2000, 8);
  ASSERT_EQ(d.cols(), 4u);
  EXPECT_EQ(d.names().back(), "y");
  const Dataset x = fam.sample(2000, 8);
  EXPECT_EQ(x.cols(), 3u);
  for (std::size_t r = 0; r < d.rows(); ++r) {
    EXPECT_LE(std::abs(d(r, 3) - 3 * d(r, 1) * d(r, 2)), 0.05);
    EXPECT_GE(std::abs(d(r, 2)), 0.5);
    EXPECT_LE(std::abs(d(r, 2)), 1.0);
    EXPECT_EQ(x(r, 0), d(r, 0));
  }
}

TEST(Pedagogical, ConditionalMonteCarlo) {
  const PedagogicalFamily fam(0.05);
  const auto f = PolynomialModel::parse("x3", 3);
  const std::vector<double> x{0.2, 0.3, 0.75};
  const MonteCarloGame mc = fam.conditional_game_mc(x, f, 4000, 2);
  // x3 is independent of the rest: the game is 0.75 on coalitions with
  // player 3 and about 0 elsewhere.
  for (Mask s = 0; s < 8; ++s) {
    if (contains(s, 2)) {
      EXPECT_NEAR(mc.game(s), 0.75, 1e-12);
    } else {
      EXPECT_LE(std::abs(mc.game(s)), 4.0 * mc.std_error[s]);
    }
  }
  // E[X1 | X2 = x2] pins Z near the inverse of sqrt(2) sin(pi z / 4).
  const auto g = PolynomialModel::parse("x1", 3);
  const MonteCarloGame m2 = fam.conditional_game_mc(x, g, 20000, 3);
  const double z = 4.0 / M_PI * std::asin(0.3 / std::sqrt(2.0));
  EXPECT_NEAR(m2.game(0b010), z, 0.05);
}

TEST(Families, Factory) {
  EXPECT_EQ(make_family("mictest")->dimension(), 7);
  EXPECT_EQ(make_family("pedagogical")->dimension(), 3);
  EXPECT_EQ(make_family("correlated:0.5")->name(), "correlated:0.5");
  EXPECT_EQ(make_family("near-duplicates:0.05")->dimension(), 3);
  EXPECT_THROW(make_family("correlated"), InputError);
  EXPECT_THROW(make_family("correlated:2"), InputError);
  EXPECT_THROW(make_family("nope"), InputError);
  EXPECT_THROW(make_family("mictest")->conditional_game_mc(std::vector<double>(7, 0.0),
                                                           PolynomialModel::parse("x1", 7),
                                                           10, 1),
               Unsupported);
}

}  // namespace
}  // namespace coalex
