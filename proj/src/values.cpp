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

#include "coalex/values.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "coalex/error.hpp"
#include "coalex/random.hpp"

namespace coalex {

namespace {

void check_enumerable(const Game& v) {
  if (v.size() > kDenseCap) {
    throw_invalid("exact values need n <= " + std::to_string(kDenseCap));
  }
}

// out[i] = sum_S v(S) * (i in S ? w[|S|-1] : -w[|S|]).
ValueVector size_weighted(const Game& v, const std::vector<double>& w) {
  check_enumerable(v);
  const int n = v.size();
  ValueVector out(n, 0.0);
  if (n == 0) return out;
  const Mask full = full_mask(n);
  for (Mask s = 0; s <= full; ++s) {
    const double val = v(s);
    const int k = cardinality(s);
    const double plus = k > 0 ? w[k - 1] * val : 0.0;
    const double minus = k < n ? w[k] * val : 0.0;
    for (int i = 0; i < n; ++i) {
      out[i] += contains(s, i) ? plus : -minus;
    }
  }
  return out;
}

double size_weighted_component(const Game& v, int i, const std::vector<double>& w) {
  check_enumerable(v);
  if (i < 0 || i >= v.size()) throw_invalid("player index out of range");
  const Mask rest = v.grand() & ~bit(i);
  double acc = 0.0;
  Mask s = 0;
  while (true) {
    acc += w[cardinality(s)] * (v(s | bit(i)) - v(s));
    if (s == rest) break;
    s = (s - rest) & rest;
  }
  return acc;
}

std::vector<double> shapley_weights(int n) {
  std::vector<double> w(std::max(n, 1));
  for (int s = 0; s < n; ++s) w[s] = shapley_weight(s, n);
  return w;
}

std::vector<double> banzhaf_weights(int n) {
  return std::vector<double>(std::max(n, 1), std::ldexp(1.0, 1 - n));
}

}  // namespace

double shapley_weight(int s, int n) {
  // 1 / (n * C(n-1, s))
  double c = 1.0;
  for (int k = 1; k <= s; ++k) c = c * (n - 1 - s + k) / k;
  return 1.0 / (n * c);
}

WeightedValueSpec WeightedValueSpec::shapley() {
  return {"shapley", [](Mask s, int n) { return shapley_weight(cardinality(s), n); }};
}

WeightedValueSpec WeightedValueSpec::banzhaf() {
  return {"banzhaf", [](Mask, int n) { return std::ldexp(1.0, 1 - n); }};
}

ValueVector shapley(const Game& v) { return size_weighted(v, shapley_weights(v.size())); }

ValueVector banzhaf(const Game& v) { return size_weighted(v, banzhaf_weights(v.size())); }

double shapley_component(const Game& v, int i) {
  return size_weighted_component(v, i, shapley_weights(v.size()));
}

double banzhaf_component(const Game& v, int i) {
  return size_weighted_component(v, i, banzhaf_weights(v.size()));
}

ValueVector weighted_value(const WeightedValueSpec& spec, const Game& v) {
  check_enumerable(v);
  const int n = v.size();
  ValueVector out(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const Mask rest = v.grand() & ~bit(i);
    Mask s = 0;
    while (true) {
      out[i] += spec.weight(s, n) * (v(s | bit(i)) - v(s));
      if (s == rest) break;
      s = (s - rest) & rest;
    }
  }
  return out;
}

GameValue shapley_value() {
  return {"shapley", [](const Game& v) { return shapley(v); },
          [](const Game& v, int i) { return shapley_component(v, i); }};
}

GameValue banzhaf_value() {
  return {"banzhaf", [](const Game& v) { return banzhaf(v); },
          [](const Game& v, int i) { return banzhaf_component(v, i); }};
}

GameValue weighted_game_value(WeightedValueSpec spec) {
  std::string name = spec.name;
  return {std::move(name),
          [spec = std::move(spec)](const Game& v) { return weighted_value(spec, v); },
          nullptr};
}

ValueVector extend_centered(const GameValue& h, const Game& v) {
  return h(centered(v));
}

ValueVector CanonicalCoefficients::reconstruct(const Game& v) const {
  if (v.size() != n_) throw_invalid("game size differs from coefficient table");
  ValueVector out(n_, 0.0);
  const std::size_t count = std::size_t{1} << n_;
  for (std::size_t s = 0; s < count; ++s) {
    const double val = v(s);
    for (int i = 0; i < n_; ++i) out[i] += (*this)(i, s) * val;
  }
  return out;
}

CanonicalCoefficients canonical_coeffs(const GameValue& h, int n, std::uint64_t seed) {
  if (n < 1 || n > 12) throw_invalid("canonical coefficients need 1 <= n <= 12");
  const std::size_t count = std::size_t{1} << n;
  std::vector<double> gamma(static_cast<std::size_t>(n) * count);
  std::vector<double> basis(count, 0.0);
  for (std::size_t s = 0; s < count; ++s) {
    basis.assign(count, 0.0);
    basis[s] = 1.0;
    const ValueVector col = h(Game::dense(n, basis));
    if (static_cast<int>(col.size()) != n) throw_invalid("value returned wrong length");
    for (int i = 0; i < n; ++i) gamma[i * count + s] = col[i];
  }
  CanonicalCoefficients table(n, std::move(gamma));
  Rng rng(seed);
  for (int trial = 0; trial < 8; ++trial) {
    std::vector<double> vals(count);
    for (double& x : vals) x = rng.uniform(-1.0, 1.0);
    const Game v = Game::dense(n, std::move(vals));
    const ValueVector direct = h(v);
    const ValueVector rebuilt = table.reconstruct(v);
    for (int i = 0; i < n; ++i) {
      if (std::abs(direct[i] - rebuilt[i]) > 1e-9) {
        throw_invalid("value '" + h.name + "' is not linear: reconstruction differs by " +
                      std::to_string(std::abs(direct[i] - rebuilt[i])));
      }
    }
  }
  return table;
}

std::string to_string(Axiom a) {
  switch (a) {
    case Axiom::kLP: return "LP";
    case Axiom::kEP: return "EP";
    case Axiom::kSP: return "SP";
    case Axiom::kTPP: return "TPP";
    case Axiom::kNPP: return "NPP";
    case Axiom::kCDP: return "CDP";
    case Axiom::kSEP: return "SEP";
  }
  return "?";
}

Axiom axiom_from_string(const std::string& s) {
  for (Axiom a : {Axiom::kLP, Axiom::kEP, Axiom::kSP, Axiom::kTPP, Axiom::kNPP,
                  Axiom::kCDP, Axiom::kSEP}) {
    if (to_string(a) == s) return a;
  }
  throw_invalid("unknown axiom '" + s + "'");
}

Game random_game(int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> vals(std::size_t{1} << n);
  for (double& x : vals) x = rng.uniform(-1.0, 1.0);
  vals[0] = 0.0;
  return Game::dense(n, std::move(vals));
}

namespace {

Game random_cooperative(int n, Rng& rng) { return random_game(n, rng.bits()); }

double max_abs_diff(const ValueVector& a, const ValueVector& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

// Deviation of one trial plus the game that produced it.
struct Trial {
  double deviation;
  Game game;
  std::string note;
};

Trial run_trial(const GameValue& h, Axiom axiom, int n, Rng& rng) {
  switch (axiom) {
    case Axiom::kLP: {
      const Game v = random_cooperative(n, rng);
      const Game w = random_cooperative(n, rng);
      const double a = rng.uniform(-2.0, 2.0);
      std::vector<double> mix(v.table().size());
      for (std::size_t s = 0; s < mix.size(); ++s) mix[s] = a * v(s) + w(s);
      const ValueVector lhs = h(Game::dense(n, std::move(mix)));
      const ValueVector hv = h(v), hw = h(w);
      ValueVector rhs(n);
      for (int i = 0; i < n; ++i) rhs[i] = a * hv[i] + hw[i];
      return {max_abs_diff(lhs, rhs), v, "a=" + std::to_string(a)};
    }
    case Axiom::kEP: {
      const Game v = random_cooperative(n, rng);
      const ValueVector x = h(v);
      const double sum = std::accumulate(x.begin(), x.end(), 0.0);
      return {std::abs(sum - v(v.grand())), v, "sum of values vs v(N)"};
    }
    case Axiom::kSP: {
      const Game v = random_cooperative(n, rng);
      std::vector<int> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      for (int k = n - 1; k > 0; --k) std::swap(perm[k], perm[rng.integer(0, k)]);
      std::vector<int> inv(n);
      for (int i = 0; i < n; ++i) inv[perm[i]] = i;
      const Game pv = Game::tabulate(n, [&](Mask s) {
        Mask pre = 0;
        for (int k : members(s)) pre |= bit(inv[k]);
        return v(pre);
      });
      const ValueVector x = h(v), y = h(pv);
      double d = 0.0;
      for (int i = 0; i < n; ++i) d = std::max(d, std::abs(y[perm[i]] - x[i]));
      return {d, v, "random relabelling"};
    }
    case Axiom::kTPP: {
      const Game v = random_cooperative(n, rng);
      const ValueVector x = h(v);
      const double sum = std::accumulate(x.begin(), x.end(), 0.0);
      double power = 0.0;
      for (Mask s = 0; s <= v.grand(); ++s) {
        for (int i = 0; i < n; ++i) {
          if (!contains(s, i)) power += v(s | bit(i)) - v(s);
        }
      }
      power = std::ldexp(power, 1 - n);
      return {std::abs(sum - power), v, "sum of values vs total power"};
    }
    case Axiom::kNPP: {
      const Game w = random_cooperative(n, rng);
      const int i = rng.integer(0, n - 1);
      const Game v = Game::tabulate(n, [&](Mask s) { return w(s & ~bit(i)); });
      return {std::abs(h.at(v, i)), v, "null player " + std::to_string(i)};
    }
    case Axiom::kCDP: {
      const Game w = random_cooperative(n, rng);
      Mask t = 0;
      while (t == 0) t = rng.bits() & full_mask(n);
      const Game v = Game::tabulate(n, [&](Mask s) { return w(s & t); });
      const ValueVector full = h(v);
      const ValueVector sub = h(subgame(v, t));
      const auto pos = members(t);
      double d = 0.0;
      for (std::size_t k = 0; k < pos.size(); ++k) {
        d = std::max(d, std::abs(full[pos[k]] - sub[k]));
      }
      return {d, v, "carrier mask " + std::to_string(t)};
    }
    case Axiom::kSEP: {
      const Game v = random_cooperative(1, rng);
      return {std::abs(h(v)[0] - v(1)), v, "one-player game"};
    }
  }
  throw_invalid("unknown axiom");
}

}  // namespace

AxiomReport axiom_check(const GameValue& h, Axiom axiom, int trials,
                        std::uint64_t seed, int min_n, int max_n) {
  if (trials < 1) throw_invalid("trials must be positive");
  if (min_n < 1 || max_n < min_n || max_n > kDenseCap) {
    throw_invalid("invalid player-count range");
  }
  AxiomReport report;
  report.axiom = axiom;
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    const int n = axiom == Axiom::kSEP ? 1 : rng.integer(min_n, max_n);
    Trial trial = run_trial(h, axiom, n, rng);
    ++report.trials;
    report.max_deviation = std::max(report.max_deviation, trial.deviation);
    if (!(trial.deviation <= kAxiomTolerance)) {
      ++report.failures;
      if (!report.witness) {
        report.witness = std::move(trial.game);
        report.witness_note = std::move(trial.note);
      }
    }
  }
  return report;
}

}  // namespace coalex
