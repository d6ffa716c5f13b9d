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

#ifndef COALEX_SYNTHETIC_HPP_
#define COALEX_SYNTHETIC_HPP_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "coalex/dataset.hpp"
#include "coalex/game.hpp"
#include "coalex/gaussian.hpp"
#include "coalex/model.hpp"

namespace coalex {

// A sampled game with a standard error per coalition (0 where exact).
struct MonteCarloGame {
  Game game;
  std::vector<double> std_error;
};

// A named generative model for predictors. All sampling is seeded.
class SyntheticFamily {
 public:
  virtual ~SyntheticFamily() = default;
  virtual std::string name() const = 0;
  virtual int dimension() const = 0;
  virtual std::vector<std::string> feature_names() const;

  virtual Dataset sample(std::size_t n, std::uint64_t seed) const = 0;
  // Features followed by a response column "y" for families that define one.
  virtual Dataset sample_with_response(std::size_t n, std::uint64_t seed) const;

  // x -> E[f(X) | X_S = x_S] in closed form; throws Unsupported otherwise.
  virtual Game conditional_game(std::span<const double> x, const Model& f) const;
  // x -> E f(x_S, X_{-S}) in closed form; throws Unsupported otherwise.
  virtual Game marginal_population_game(std::span<const double> x, const Model& f) const;
  // Monte Carlo estimate of the conditional game.
  virtual MonteCarloGame conditional_game_mc(std::span<const double> x, const Model& f,
                                             std::size_t draws, std::uint64_t seed) const;
};

// X = L Z + diag(noise) E with Z, E independent standard normal vectors.
class LatentLinearFamily : public SyntheticFamily {
 public:
  LatentLinearFamily(Eigen::MatrixXd loadings, Eigen::VectorXd noise, std::string name);

  // X1 ~ N(0,1), X2 = rho X1 + sqrt(1 - rho^2) E2, X3 ~ N(0,1) independent.
  static LatentLinearFamily correlated_pair(double rho);
  // X1 = Z + delta E1, X2 = Z + delta E2, X3 ~ N(0,1) independent.
  static LatentLinearFamily near_duplicates(double delta);
  // Independent blocks of the given sizes, each driven by its own latent
  // factor with random loadings; seeded.
  static LatentLinearFamily random_blocks(const std::vector<int>& block_sizes,
                                          std::uint64_t seed);

  std::string name() const override { return name_; }
  int dimension() const override { return static_cast<int>(loadings_.rows()); }
  Dataset sample(std::size_t n, std::uint64_t seed) const override;
  Game conditional_game(std::span<const double> x, const Model& f) const override;
  Game marginal_population_game(std::span<const double> x, const Model& f) const override;
  MonteCarloGame conditional_game_mc(std::span<const double> x, const Model& f,
                                     std::size_t draws, std::uint64_t seed) const override;

  const GaussianModel& gaussian() const { return gaussian_; }
  // One quadratic form per coalition (2^n entries) for quadratic models.
  std::vector<QuadraticForm> conditional_forms(const QuadraticForm& q) const;
  std::vector<QuadraticForm> marginal_forms(const QuadraticForm& q) const;

 private:
  Eigen::MatrixXd loadings_;
  Eigen::VectorXd noise_;
  GaussianModel gaussian_;
  std::string name_;
};

// Seven predictors: X0 uniform on (-4pi, 4pi) with X1 = X0^2 + E1,
// X2 = sin X0 + E2, X3 = X0/2 + E3; X4 uniform on (0, 10); a noisy circle
// (X5, X6) of radius 2. Noise scales are standard deviations 1, 1/4, 1/4,
// 1/10, 1/10.
class MicTestFamily : public SyntheticFamily {
 public:
  std::string name() const override { return "mictest"; }
  int dimension() const override { return 7; }
  std::vector<std::string> feature_names() const override;
  Dataset sample(std::size_t n, std::uint64_t seed) const override;
};

// Z uniform on (-1, 1), X1 = Z + E1, X2 = sqrt(2) sin(pi Z / 4) + E2 with
// E_i ~ N(0, delta^2), X3 uniform on [-1,-0.5] U [0.5,1]; response
// 3 X2 X3 + U(-0.05, 0.05).
class PedagogicalFamily : public SyntheticFamily {
 public:
  explicit PedagogicalFamily(double delta = 0.05);

  std::string name() const override;
  int dimension() const override { return 3; }
  Dataset sample(std::size_t n, std::uint64_t seed) const override;
  Dataset sample_with_response(std::size_t n, std::uint64_t seed) const override;
  // Self-normalized importance sampling over the latent Z.
  MonteCarloGame conditional_game_mc(std::span<const double> x, const Model& f,
                                     std::size_t draws, std::uint64_t seed) const override;

 private:
  double delta_;
};

// "mictest", "pedagogical[:delta]", "correlated:<rho>",
// "near-duplicates:<delta>".
std::unique_ptr<SyntheticFamily> make_family(const std::string& spec);

}  // namespace coalex

#endif  // COALEX_SYNTHETIC_HPP_
