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

#ifndef COALEX_EXPLAIN_HPP_
#define COALEX_EXPLAIN_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coalex/dataset.hpp"
#include "coalex/game.hpp"
#include "coalex/model.hpp"
#include "coalex/partition_tree.hpp"
#include "coalex/synthetic.hpp"

namespace coalex {

// v(S) = sum over background rows r of w_r f(x_S, r_{-S}). Dense for up to
// 16 predictors, memoized lazily above that.
Game empirical_marginal_game(std::span<const double> x, const Model& f, const Dataset& bg);

enum class GameKind { kMarginal, kConditional };
enum class GameMethod { kAuto, kEmpirical, kClosedForm, kMonteCarlo };

std::string to_string(GameKind kind);
std::string to_string(GameMethod method);
GameKind game_kind_from_string(const std::string& s);
GameMethod game_method_from_string(const std::string& s);

struct ExplainOptions {
  // "shapley", "banzhaf" or any coalitional value name.
  std::string value = "shapley";
  std::optional<Partition> partition;
  std::optional<PartitionTree> tree;
  // Cut levels for tree explanations; empty means {0}.
  std::vector<double> alphas;
  GameKind game = GameKind::kMarginal;
  GameMethod method = GameMethod::kAuto;
  const SyntheticFamily* family = nullptr;
  std::size_t mc_draws = 4000;
  std::uint64_t seed = 1;
  int workers = 1;
  // Rows of efficient values must sum to f(x) - v(empty) within
  // efficiency_tolerance * max(1, |f(x)|); violations throw InvariantError.
  bool check_efficiency = true;
  double efficiency_tolerance = 1e-8;
};

struct ExplanationMeta {
  std::string game;       // "ME" or "CE"
  std::string method;     // empirical, closed-form, monte-carlo
  std::string value;
  std::string structure;  // none, partition, tree
  std::optional<double> alpha;
  std::string model;
  std::string data_hash;
  std::string background_hash;
  std::string family;
  bool efficient = false;
  bool quotient_property = false;
};

// Attributions for every sample: one column per feature (individual), per
// block (block sums of the individual values) and per block of the value
// applied to the quotient game (node values for tree cuts).
struct ExplanationMatrix {
  std::size_t samples = 0;
  Partition partition;
  std::vector<std::string> feature_labels;
  std::vector<std::string> block_labels;
  std::vector<double> individual;  // samples x features
  std::vector<double> group;       // samples x blocks
  std::vector<double> quotient;    // samples x blocks
  std::vector<double> prediction;  // f(x)
  std::vector<double> baseline;    // v(empty)
  // Standard errors, filled only for Monte Carlo games.
  std::vector<double> individual_se;
  std::vector<double> group_se;
  std::vector<double> quotient_se;
  std::vector<double> weights;  // normalized sample weights
  double max_efficiency_gap = 0.0;
  ExplanationMeta meta;

  int features() const { return partition.num_players(); }
  int blocks() const { return partition.num_blocks(); }
  double ind(std::size_t r, int i) const { return individual[r * features() + i]; }
  double grp(std::size_t r, int j) const { return group[r * blocks() + j]; }
  double quo(std::size_t r, int j) const { return quotient[r * blocks() + j]; }
};

// One matrix per requested cut level (a single matrix without a tree).
std::vector<ExplanationMatrix> explain_sweep(const Dataset& data, const Dataset* background,
                                             const Model& f, const ExplainOptions& opts);

ExplanationMatrix explain(const Dataset& data, const Dataset* background, const Model& f,
                          const ExplainOptions& opts);

// Game for a single explicand under the options' game kind and method,
// with per-coalition standard errors (all zero unless sampled).
MonteCarloGame build_game(std::span<const double> x, const Dataset* background,
                          const Model& f, const ExplainOptions& opts, std::uint64_t stream);

}  // namespace coalex

#endif  // COALEX_EXPLAIN_HPP_
