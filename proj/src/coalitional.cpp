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

#include "coalex/coalitional.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "coalex/error.hpp"

namespace coalex {

namespace {

struct WeightPair {
  std::vector<double> outer;  // by |R|, blocks m
  std::vector<double> inner;  // by |T|, block size s
};

std::vector<double> size_weights(bool shapley_type, int n) {
  std::vector<double> w(std::max(n, 1));
  for (int k = 0; k < n; ++k) {
    w[k] = shapley_type ? shapley_weight(k, n) : std::ldexp(1.0, 1 - n);
  }
  return w;
}

// Shapley-type (true) or Banzhaf-type (false) weights for the outer and
// inner sums of each double-sum family.
std::pair<bool, bool> weight_types(CoalitionalKind kind) {
  switch (kind) {
    case CoalitionalKind::kOwen: return {true, true};
    case CoalitionalKind::kBanzhafOwen: return {false, false};
    case CoalitionalKind::kSymmetricBanzhaf: return {false, true};
    default: break;
  }
  throw_invalid("kind has no double-sum form");
}

void check_sizes(const Game& v, const Partition& p) {
  if (p.num_players() != v.size()) throw_invalid("partition and game sizes differ");
  if (p.num_blocks() > kDenseCap) throw_invalid("too many blocks");
  for (Mask b : p.blocks()) {
    if (cardinality(b) > kDenseCap) throw_invalid("block too large");
  }
}

// All players of block j under a double-sum family.
void double_sum_block(const Game& c, const Partition& p, const std::vector<Mask>& unions,
                      int j, const std::vector<double>& wo, const std::vector<double>& wi,
                      ValueVector& out) {
  const auto pos = members(p.block(j));
  const int s = static_cast<int>(pos.size());
  const auto dep = deposit_table(pos);
  const Mask others = full_mask(p.num_blocks()) & ~bit(j);
  std::vector<double> val(dep.size());
  std::vector<double> acc(s, 0.0);
  Mask r = 0;
  while (true) {
    const Mask q = unions[r];
    for (std::size_t t = 0; t < dep.size(); ++t) val[t] = c(q | dep[t]);
    const double w_r = wo[cardinality(r)];
    for (int k = 0; k < s; ++k) {
      double inner = 0.0;
      for (std::size_t t = 0; t < dep.size(); ++t) {
        if (t & bit(k)) continue;
        inner += wi[cardinality(t)] * (val[t | bit(k)] - val[t]);
      }
      acc[k] += w_r * inner;
    }
    if (r == others) break;
    r = (r - others) & others;
  }
  for (int k = 0; k < s; ++k) out[pos[k]] = acc[k];
}

ValueVector double_sum(CoalitionalKind kind, const Game& v, const Partition& p) {
  check_sizes(v, p);
  const auto [outer_shapley, inner_shapley] = weight_types(kind);
  const Game c = centered(v);
  const auto unions = p.union_table();
  const auto wo = size_weights(outer_shapley, p.num_blocks());
  ValueVector out(v.size(), 0.0);
  for (int j = 0; j < p.num_blocks(); ++j) {
    const auto wi = size_weights(inner_shapley, cardinality(p.block(j)));
    double_sum_block(c, p, unions, j, wo, wi, out);
  }
  return out;
}

// Literal value of the intermediate game for block j and T inside S_j on the
// block coalition a. `qv` holds the quotient game table of c.
struct IntermediateBuilder {
  const Game& c;
  const Partition& p;
  const std::vector<Mask>& unions;
  const std::vector<double>& qv;

  void fill(IntermediateFamily family, int j, Mask t, std::vector<double>& out) const {
    const Mask bj = bit(j);
    out.resize(unions.size());
    if (family == IntermediateFamily::kModifiedQuotient) {
      for (std::size_t a = 0; a < unions.size(); ++a) {
        out[a] = (a & bj) ? c(unions[a & ~bj] | t) : qv[a];
      }
      return;
    }
    const double ratio =
        static_cast<double>(cardinality(t)) / cardinality(p.block(j));
    const double shift = c(t) - ratio * qv[bj];
    for (std::size_t a = 0; a < unions.size(); ++a) {
      out[a] = ratio * qv[a] + cardinality(a) * shift;
    }
  }
};

}  // namespace

CoalitionalValueSpec CoalitionalValueSpec::owen() {
  CoalitionalValueSpec s;
  s.kind_ = CoalitionalKind::kOwen;
  s.name_ = "owen";
  s.h1_ = shapley_value();
  s.h2_ = shapley_value();
  s.family_ = IntermediateFamily::kModifiedQuotient;
  return s;
}

CoalitionalValueSpec CoalitionalValueSpec::banzhaf_owen() {
  CoalitionalValueSpec s;
  s.kind_ = CoalitionalKind::kBanzhafOwen;
  s.name_ = "banzhaf-owen";
  s.h1_ = banzhaf_value();
  s.h2_ = banzhaf_value();
  s.family_ = IntermediateFamily::kModifiedQuotient;
  s.efficient_ = false;
  s.quotient_property_ = false;
  return s;
}

CoalitionalValueSpec CoalitionalValueSpec::two_step_shapley() {
  CoalitionalValueSpec s;
  s.kind_ = CoalitionalKind::kTwoStepShapley;
  s.name_ = "two-step-shapley";
  s.h1_ = shapley_value();
  s.h2_ = shapley_value();
  s.family_ = IntermediateFamily::kTshIntermediate;
  return s;
}

CoalitionalValueSpec CoalitionalValueSpec::symmetric_banzhaf() {
  CoalitionalValueSpec s;
  s.kind_ = CoalitionalKind::kSymmetricBanzhaf;
  s.name_ = "symmetric-banzhaf";
  s.h1_ = banzhaf_value();
  s.h2_ = shapley_value();
  s.family_ = IntermediateFamily::kModifiedQuotient;
  s.efficient_ = false;
  return s;
}

CoalitionalValueSpec CoalitionalValueSpec::by_name(const std::string& name) {
  if (name == "owen") return owen();
  if (name == "banzhaf-owen" || name == "bzow") return banzhaf_owen();
  if (name == "two-step-shapley" || name == "tsh") return two_step_shapley();
  if (name == "symmetric-banzhaf" || name == "bzsym") return symmetric_banzhaf();
  throw_invalid("unknown coalitional value '" + name + "'");
}

CoalitionalValueSpec CoalitionalValueSpec::custom(std::string name, GameValue h1,
                                                  GameValue h2,
                                                  IntermediateFamily family,
                                                  std::uint64_t seed) {
  if (!h1.all || !h2.all) throw_invalid("custom spec needs both values");
  constexpr int kTrials = 25;
  auto require = [&](const GameValue& h, Axiom a, const char* role) {
    const AxiomReport r = axiom_check(h, a, kTrials, seed, 2, 6);
    if (!r.passed()) {
      throw_invalid("custom spec '" + name + "': " + role + " '" + h.name +
                    "' fails " + to_string(a) + " (deviation " +
                    std::to_string(r.max_deviation) + ")");
    }
  };
  require(h1, Axiom::kSP, "outer value");
  require(h1, Axiom::kLP, "outer value");
  require(h1, Axiom::kSEP, "outer value");
  require(h2, Axiom::kLP, "inner value");
  require(h2, Axiom::kSEP, "inner value");

  CoalitionalValueSpec s;
  s.kind_ = CoalitionalKind::kCustom;
  s.name_ = std::move(name);
  s.h1_ = std::move(h1);
  s.h2_ = std::move(h2);
  s.family_ = family;
  s.quotient_property_ = axiom_check(s.h2_, Axiom::kEP, kTrials, seed, 2, 6).passed();
  s.efficient_ = s.quotient_property_ &&
                 axiom_check(s.h1_, Axiom::kEP, kTrials, seed, 2, 6).passed();

  // The unit one-player game must receive a nonzero payoff.
  const Game unit = Game::dense(1, {0.0, 1.0});
  const double g = two_step_evaluate(s, unit, Partition::singletons(1))[0];
  if (!(std::abs(g) > 1e-12)) {
    throw_invalid("custom spec '" + s.name_ +
                  "': unit one-player game gets payoff 0, cannot be normalized");
  }
  return s;
}

ValueVector owen(const Game& v, const Partition& p) {
  return double_sum(CoalitionalKind::kOwen, v, p);
}

ValueVector banzhaf_owen(const Game& v, const Partition& p) {
  return double_sum(CoalitionalKind::kBanzhafOwen, v, p);
}

ValueVector symmetric_banzhaf(const Game& v, const Partition& p) {
  return double_sum(CoalitionalKind::kSymmetricBanzhaf, v, p);
}

ValueVector two_step_shapley(const Game& v, const Partition& p) {
  check_sizes(v, p);
  const Game c = centered(v);
  const ValueVector outer = shapley(quotient_game(c, p));
  ValueVector out(v.size(), 0.0);
  for (int j = 0; j < p.num_blocks(); ++j) {
    const Mask b = p.block(j);
    const auto pos = members(b);
    const ValueVector inner = shapley(subgame(c, b));
    const double corr = (outer[j] - c(b)) / static_cast<double>(pos.size());
    for (std::size_t k = 0; k < pos.size(); ++k) out[pos[k]] = inner[k] + corr;
  }
  return out;
}

double coalitional_component(CoalitionalKind kind, const Game& v, const Partition& p,
                             int i) {
  check_sizes(v, p);
  if (i < 0 || i >= v.size()) throw_invalid("player index out of range");
  if (kind == CoalitionalKind::kTwoStepShapley) return two_step_shapley(v, p)[i];
  const auto [outer_shapley, inner_shapley] = weight_types(kind);
  const int j = p.block_of(i);
  const Mask b = p.block(j);
  const auto wo = size_weights(outer_shapley, p.num_blocks());
  const auto wi = size_weights(inner_shapley, cardinality(b));
  const auto unions = p.union_table();
  const Mask others = full_mask(p.num_blocks()) & ~bit(j);
  const Mask rest = b & ~bit(i);
  double acc = 0.0;
  Mask r = 0;
  while (true) {
    const Mask q = unions[r];
    Mask t = 0;
    double inner = 0.0;
    while (true) {
      inner += wi[cardinality(t)] * (v(q | t | bit(i)) - v(q | t));
      if (t == rest) break;
      t = (t - rest) & rest;
    }
    acc += wo[cardinality(r)] * inner;
    if (r == others) break;
    r = (r - others) & others;
  }
  return acc;
}

ValueVector two_step_evaluate(const CoalitionalValueSpec& spec, const Game& v,
                              const Partition& p) {
  check_sizes(v, p);
  const Game c = centered(v);
  const auto unions = p.union_table();
  std::vector<double> qv(unions.size());
  for (std::size_t a = 0; a < unions.size(); ++a) qv[a] = c(unions[a]);
  const IntermediateBuilder build{c, p, unions, qv};
  const int m = p.num_blocks();

  ValueVector out(v.size(), 0.0);
  std::vector<double> table;
  for (int j = 0; j < m; ++j) {
    const auto pos = members(p.block(j));
    const auto dep = deposit_table(pos);
    std::vector<double> vj(dep.size());
    for (std::size_t t = 0; t < dep.size(); ++t) {
      build.fill(spec.family(), j, dep[t], table);
      vj[t] = spec.outer().at(Game::dense(m, table), j);
    }
    const ValueVector inner = spec.inner()(Game::dense(static_cast<int>(pos.size()), vj));
    for (std::size_t k = 0; k < pos.size(); ++k) out[pos[k]] = inner[k];
  }
  return out;
}

ValueVector coalitional_value(const CoalitionalValueSpec& spec, const Game& v,
                              const Partition& p) {
  switch (spec.kind()) {
    case CoalitionalKind::kOwen: return owen(v, p);
    case CoalitionalKind::kBanzhafOwen: return banzhaf_owen(v, p);
    case CoalitionalKind::kTwoStepShapley: return two_step_shapley(v, p);
    case CoalitionalKind::kSymmetricBanzhaf: return symmetric_banzhaf(v, p);
    case CoalitionalKind::kCustom: return two_step_evaluate(spec, v, p);
  }
  throw_invalid("unknown coalitional kind");
}

CoalitionalResult evaluate_coalitional(const CoalitionalValueSpec& spec, const Game& v,
                                       const Partition& p) {
  CoalitionalResult r;
  r.spec_name = spec.name();
  r.partition = p;
  r.per_player = coalitional_value(spec, v, p);
  r.per_block.assign(p.num_blocks(), 0.0);
  for (int i = 0; i < v.size(); ++i) r.per_block[p.block_of(i)] += r.per_player[i];
  r.quotient = spec.outer()(quotient_game(centered(v), p));
  return r;
}

QuotientPropertyReport quotient_property_check(const CoalitionalValueSpec& spec,
                                               const Game& v, const Partition& p,
                                               double tol) {
  const ValueVector x = coalitional_value(spec, v, p);
  const Game q = quotient_game(v, p);
  const ValueVector y =
      coalitional_value(spec, q, Partition::singletons(p.num_blocks()));
  std::vector<double> sums(p.num_blocks(), 0.0);
  for (int i = 0; i < v.size(); ++i) sums[p.block_of(i)] += x[i];
  QuotientPropertyReport r;
  for (int j = 0; j < p.num_blocks(); ++j) {
    const double d = std::abs(sums[j] - y[j]);
    if (d > r.max_deviation) {
      r.max_deviation = d;
      r.worst_block = j;
    }
  }
  r.passed = r.max_deviation <= tol;
  return r;
}

}  // namespace coalex
