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

#ifndef COALEX_COALITIONAL_HPP_
#define COALEX_COALITIONAL_HPP_

#include <cstdint>
#include <string>

#include "coalex/game.hpp"
#include "coalex/values.hpp"

namespace coalex {

// Family of block games used by the two-step evaluator.
enum class IntermediateFamily { kModifiedQuotient, kTshIntermediate };

enum class CoalitionalKind { kOwen, kBanzhafOwen, kTwoStepShapley, kSymmetricBanzhaf, kCustom };

// A coalitional value g[N, v, P] given in two-step form: an outer value h1
// across blocks, an inner value h2 within a block, and an intermediate game
// family linking them.
class CoalitionalValueSpec {
 public:
  static CoalitionalValueSpec owen();
  static CoalitionalValueSpec banzhaf_owen();
  static CoalitionalValueSpec two_step_shapley();
  static CoalitionalValueSpec symmetric_banzhaf();
  // Accepts "owen", "banzhaf-owen", "two-step-shapley", "symmetric-banzhaf"
  // and a few aliases.
  static CoalitionalValueSpec by_name(const std::string& name);

  // Validates h1 (symmetric, linear, identity on one player), h2 (linear,
  // SEP) and the nondegeneracy of the unit one-player game. Throws
  // InvalidArgument describing the first violated hypothesis.
  static CoalitionalValueSpec custom(std::string name, GameValue h1, GameValue h2,
                                     IntermediateFamily family,
                                     std::uint64_t seed = 11);

  CoalitionalKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const GameValue& outer() const { return h1_; }
  const GameValue& inner() const { return h2_; }
  IntermediateFamily family() const { return family_; }

  // Efficient: block sums total v(N) - v(empty).
  bool efficient() const { return efficient_; }
  // Expected to satisfy the quotient game property (h2 efficient).
  bool quotient_property() const { return quotient_property_; }

 private:
  CoalitionalKind kind_ = CoalitionalKind::kOwen;
  std::string name_;
  GameValue h1_;
  GameValue h2_;
  IntermediateFamily family_ = IntermediateFamily::kModifiedQuotient;
  bool efficient_ = true;
  bool quotient_property_ = true;
};

// Direct double-sum formulas. Non-cooperative games enter through their
// centered extension.
ValueVector owen(const Game& v, const Partition& p);
ValueVector banzhaf_owen(const Game& v, const Partition& p);
ValueVector two_step_shapley(const Game& v, const Partition& p);
ValueVector symmetric_banzhaf(const Game& v, const Partition& p);

// Value of a single player by the direct formula. Evaluates v exactly
// 2^(m-1) * 2^|S_j| times for the double-sum families.
double coalitional_component(CoalitionalKind kind, const Game& v, const Partition& p,
                             int i);

// For each block j: v^(j)(T) = h1_j[M, intermediate_T] for T inside S_j,
// then h2 applied to v^(j) on S_j.
ValueVector two_step_evaluate(const CoalitionalValueSpec& spec, const Game& v,
                              const Partition& p);

// Direct formula for the named kinds, two-step evaluation for custom specs.
ValueVector coalitional_value(const CoalitionalValueSpec& spec, const Game& v,
                              const Partition& p);

struct CoalitionalResult {
  std::string spec_name;
  Partition partition;
  ValueVector per_player;
  std::vector<double> per_block;  // block sums of per_player
  ValueVector quotient;           // outer value of the quotient game
};

CoalitionalResult evaluate_coalitional(const CoalitionalValueSpec& spec, const Game& v,
                                       const Partition& p);

struct QuotientPropertyReport {
  double max_deviation = 0.0;
  int worst_block = -1;
  bool passed = true;
};

inline constexpr double kQuotientTolerance = 1e-10;

// Compares block sums of g[N, v, P] with g_j[M, v^P, singletons].
QuotientPropertyReport quotient_property_check(const CoalitionalValueSpec& spec,
                                               const Game& v, const Partition& p,
                                               double tol = kQuotientTolerance);

}  // namespace coalex

#endif  // COALEX_COALITIONAL_HPP_
