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

#ifndef COALEX_VALUES_HPP_
#define COALEX_VALUES_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "coalex/game.hpp"

namespace coalex {

using ValueVector = std::vector<double>;

// A game value h: (N, v) -> R^n. `component`, when set, computes a single
// coordinate faster than `all`.
struct GameValue {
  std::string name;
  std::function<ValueVector(const Game&)> all;
  std::function<double(const Game&, int)> component;

  ValueVector operator()(const Game& v) const { return all(v); }
  double at(const Game& v, int i) const {
    return component ? component(v, i) : all(v)[i];
  }
};

// Weights w(S, n) of a value of the form
//   h_i = sum_{S in N\{i}} w(S, n) [v(S + i) - v(S)].
// The weight may depend on S only through its bitmask.
struct WeightedValueSpec {
  std::string name;
  std::function<double(Mask s, int n)> weight;

  static WeightedValueSpec shapley();
  static WeightedValueSpec banzhaf();
};

// The formulas below are applied to v as given, including the S = empty
// term with v(empty); the result equals the value of v - v(empty).
ValueVector shapley(const Game& v);
ValueVector banzhaf(const Game& v);
ValueVector weighted_value(const WeightedValueSpec& spec, const Game& v);

double shapley_component(const Game& v, int i);
double banzhaf_component(const Game& v, int i);

// shapley_weight(s, n) = s!(n-s-1)!/n!.
double shapley_weight(int s, int n);

GameValue shapley_value();
GameValue banzhaf_value();
GameValue weighted_game_value(WeightedValueSpec spec);

// h applied to the game S -> v(S) - v(empty).
ValueVector extend_centered(const GameValue& h, const Game& v);

// gamma(i, S) = h_i[N, e_S] for the indicator games e_S(A) = [A = S].
class CanonicalCoefficients {
 public:
  CanonicalCoefficients(int n, std::vector<double> gamma)
      : n_(n), gamma_(std::move(gamma)) {}

  int size() const { return n_; }
  double operator()(int i, Mask s) const {
    return gamma_[static_cast<std::size_t>(i) * (std::size_t{1} << n_) + s];
  }
  // sum_S gamma(i, S) v(S) for every i.
  ValueVector reconstruct(const Game& v) const;

 private:
  int n_;
  std::vector<double> gamma_;
};

// Builds the table and verifies the reconstruction on random games; throws
// InvalidArgument if h turns out not to be linear.
CanonicalCoefficients canonical_coeffs(const GameValue& h, int n,
                                       std::uint64_t seed = 7);

enum class Axiom { kLP, kEP, kSP, kTPP, kNPP, kCDP, kSEP };

std::string to_string(Axiom a);
Axiom axiom_from_string(const std::string& s);

struct AxiomReport {
  Axiom axiom;
  int trials = 0;
  int failures = 0;
  double max_deviation = 0.0;
  std::optional<Game> witness;  // first failing game
  std::string witness_note;

  bool passed() const { return failures == 0; }
};

inline constexpr double kAxiomTolerance = 1e-9;

// Randomized check on cooperative games with payoffs uniform in [-1, 1] and
// player counts drawn from [min_n, max_n] (SEP always uses n = 1).
AxiomReport axiom_check(const GameValue& h, Axiom axiom, int trials,
                        std::uint64_t seed, int min_n = 2, int max_n = 8);

// A random cooperative dense game with payoffs uniform in [-1, 1].
Game random_game(int n, std::uint64_t seed);

}  // namespace coalex

#endif  // COALEX_VALUES_HPP_
