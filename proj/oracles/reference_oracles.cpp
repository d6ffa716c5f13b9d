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

#include "reference_oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace coalex::oracle {

namespace {

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

std::uint64_t set_of(const std::vector<int>& players) {
  std::uint64_t s = 0;
  for (int p : players) s |= std::uint64_t{1} << p;
  return s;
}

int popcount(std::uint64_t s) { return static_cast<int>(__builtin_popcountll(s)); }

// Subsets of the given members, as masks over the original players.
std::vector<std::uint64_t> subsets_of(const std::vector<int>& members) {
  std::vector<std::uint64_t> out;
  const std::size_t k = members.size();
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << k); ++code) {
    std::uint64_t s = 0;
    for (std::size_t b = 0; b < k; ++b) {
      if (code >> b & 1) s |= std::uint64_t{1} << members[b];
    }
    out.push_back(s);
  }
  return out;
}

void check_blocks(const Game& v, const Blocks& p) {
  std::uint64_t seen = 0;
  for (const auto& b : p) {
    if (b.empty()) throw std::invalid_argument("empty block");
    for (int i : b) {
      if (i < 0 || i >= v.size() || (seen >> i & 1)) throw std::invalid_argument("bad partition");
      seen |= std::uint64_t{1} << i;
    }
  }
  if (popcount(seen) != v.size()) throw std::invalid_argument("partition does not cover");
}

struct Located {
  int block;
  std::vector<int> others_in_block;
  std::vector<int> other_blocks;
};

Located locate(const Blocks& p, int i) {
  Located l{-1, {}, {}};
  for (int j = 0; j < static_cast<int>(p.size()); ++j) {
    if (std::find(p[j].begin(), p[j].end(), i) != p[j].end()) {
      l.block = j;
      for (int q : p[j]) {
        if (q != i) l.others_in_block.push_back(q);
      }
    } else {
      l.other_blocks.push_back(j);
    }
  }
  return l;
}

// sum over R of other blocks, T within own block of
// outer(|R|, m) * inner(|T|, s) * (v(Q u T u i) - v(Q u T)).
template <typename Outer, typename Inner>
std::vector<double> double_sum(const Game& v, const Blocks& p, Outer outer, Inner inner) {
  check_blocks(v, p);
  const int n = v.size();
  const int m = static_cast<int>(p.size());
  std::vector<double> out(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const Located l = locate(p, i);
    const int s = static_cast<int>(p[l.block].size());
    const auto inner_sets = subsets_of(l.others_in_block);
    const std::size_t ob = l.other_blocks.size();
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << ob); ++code) {
      std::uint64_t q = 0;
      int r = 0;
      for (std::size_t b = 0; b < ob; ++b) {
        if (code >> b & 1) {
          q |= set_of(p[l.other_blocks[b]]);
          ++r;
        }
      }
      const double wo = outer(r, m);
      for (std::uint64_t t : inner_sets) {
        const double wi = inner(popcount(t), s);
        const std::uint64_t base = q | t;
        out[i] += wo * wi * (v(base | (std::uint64_t{1} << i)) - v(base));
      }
    }
  }
  return out;
}

double shapley_w(int k, int n) { return factorial(k) * factorial(n - k - 1) / factorial(n); }
double banzhaf_w(int, int n) { return std::ldexp(1.0, 1 - n); }

Game centered_copy(const Game& v) {
  const int n = v.size();
  std::vector<double> t(std::size_t{1} << n);
  for (std::size_t s = 1; s < t.size(); ++s) t[s] = v(s) - v(0);
  return Game::dense(n, std::move(t));
}

Game quotient_copy(const Game& v, const Blocks& p) {
  const int m = static_cast<int>(p.size());
  std::vector<double> t(std::size_t{1} << m);
  for (std::size_t a = 0; a < t.size(); ++a) {
    std::uint64_t u = 0;
    for (int j = 0; j < m; ++j) {
      if (a >> j & 1) u |= set_of(p[j]);
    }
    t[a] = v(u);
  }
  return Game::dense(m, std::move(t));
}

Game restricted_copy(const Game& v, const std::vector<int>& members) {
  const auto subsets = subsets_of(members);
  std::vector<double> t(subsets.size());
  for (std::size_t k = 0; k < subsets.size(); ++k) t[k] = v(subsets[k]);
  return Game::dense(static_cast<int>(members.size()), std::move(t));
}

class Draw {
 public:
  explicit Draw(std::uint64_t seed) : eng_(seed) {}
  double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  int below(int k) { return static_cast<int>(eng_() % static_cast<std::uint64_t>(k)); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace

std::vector<double> shapley_by_permutations(const Game& v) {
  const int n = v.size();
  if (n > 8) throw std::invalid_argument("permutation oracle limited to 8 players");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> out(n, 0.0);
  double count = 0.0;
  do {
    std::uint64_t s = 0;
    for (int i : order) {
      const std::uint64_t t = s | (std::uint64_t{1} << i);
      out[i] += v(t) - v(s);
      s = t;
    }
    count += 1.0;
  } while (std::next_permutation(order.begin(), order.end()));
  for (double& x : out) x /= count;
  return out;
}

std::vector<double> banzhaf_by_enumeration(const Game& v) {
  const int n = v.size();
  std::vector<double> out(n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
      if (s >> i & 1) continue;
      out[i] += v(s | (std::uint64_t{1} << i)) - v(s);
    }
    out[i] = std::ldexp(out[i], 1 - n);
  }
  return out;
}

std::vector<double> owen_double_sum(const Game& v, const Blocks& p) {
  return double_sum(v, p, shapley_w, shapley_w);
}

std::vector<double> banzhaf_owen_double_sum(const Game& v, const Blocks& p) {
  return double_sum(v, p, banzhaf_w, banzhaf_w);
}

std::vector<double> symmetric_banzhaf_double_sum(const Game& v, const Blocks& p) {
  return double_sum(v, p, banzhaf_w, shapley_w);
}

std::vector<double> two_step_shapley_direct(const Game& v, const Blocks& p) {
  check_blocks(v, p);
  const Game c = centered_copy(v);
  const auto quotient = shapley_by_permutations(quotient_copy(c, p));
  std::vector<double> out(v.size(), 0.0);
  for (std::size_t j = 0; j < p.size(); ++j) {
    const auto within = shapley_by_permutations(restricted_copy(c, p[j]));
    const double s = static_cast<double>(p[j].size());
    const double surplus = (quotient[j] - c(set_of(p[j]))) / s;
    for (std::size_t k = 0; k < p[j].size(); ++k) out[p[j][k]] = within[k] + surplus;
  }
  return out;
}

std::vector<double> owen_by_permutations(const Game& v, const Blocks& p) {
  check_blocks(v, p);
  if (v.size() > 8) throw std::invalid_argument("permutation oracle limited to 8 players");
  const int n = v.size();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<int> block_of(n);
  for (std::size_t j = 0; j < p.size(); ++j) {
    for (int i : p[j]) block_of[i] = static_cast<int>(j);
  }
  std::vector<double> out(n, 0.0);
  double count = 0.0;
  do {
    // Consistent orders keep every block contiguous.
    bool ok = true;
    std::vector<bool> closed(p.size(), false);
    for (int k = 0; k < n && ok; ++k) {
      const int b = block_of[order[k]];
      if (closed[b]) ok = false;
      if (k + 1 < n && block_of[order[k + 1]] != b) closed[b] = true;
    }
    if (!ok) continue;
    std::uint64_t s = 0;
    for (int i : order) {
      const std::uint64_t t = s | (std::uint64_t{1} << i);
      out[i] += v(t) - v(s);
      s = t;
    }
    count += 1.0;
  } while (std::next_permutation(order.begin(), order.end()));
  for (double& x : out) x /= count;
  return out;
}

std::vector<double> reference_value(CoalitionalKind kind, const Game& v, const Blocks& p) {
  switch (kind) {
    case CoalitionalKind::kOwen: return owen_double_sum(v, p);
    case CoalitionalKind::kBanzhafOwen: return banzhaf_owen_double_sum(v, p);
    case CoalitionalKind::kTwoStepShapley: return two_step_shapley_direct(v, p);
    case CoalitionalKind::kSymmetricBanzhaf: return symmetric_banzhaf_double_sum(v, p);
    case CoalitionalKind::kCustom: break;
  }
  throw std::invalid_argument("no reference for custom values");
}

std::vector<Blocks> enumerate_partitions(int n, int max_blocks) {
  std::vector<Blocks> out;
  std::vector<int> label(n, 0);
  // Restricted growth strings.
  auto rec = [&](auto&& self, int pos, int used) -> void {
    if (pos == n) {
      Blocks b(used);
      for (int i = 0; i < n; ++i) b[label[i]].push_back(i);
      out.push_back(std::move(b));
      return;
    }
    for (int c = 0; c <= used && c < max_blocks; ++c) {
      label[pos] = c;
      self(self, pos + 1, std::max(used, c + 1));
    }
  };
  if (n > 0) rec(rec, 0, 0);
  return out;
}

namespace {

std::vector<int> lower_bin_equipartition(const std::vector<double>& v, int bins) {
  const int n = static_cast<int>(v.size());
  std::vector<int> out(n);
  for (int i = 0; i < n; ++i) {
    // Rank of the first sample equal to v[i] in sorted order.
    int below = 0;
    for (int q = 0; q < n; ++q) {
      if (v[q] < v[i]) ++below;
    }
    out[i] = (below * bins) / n;
  }
  return out;
}

double mi_nats(const std::vector<int>& a, int na, const std::vector<int>& b, int nb) {
  const std::size_t n = a.size();
  std::vector<double> joint(na * nb, 0.0), pa(na, 0.0), pb(nb, 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    joint[a[s] * nb + b[s]] += 1.0;
    pa[a[s]] += 1.0;
    pb[b[s]] += 1.0;
  }
  double mi = 0.0;
  const double total = static_cast<double>(n);
  for (int i = 0; i < na; ++i) {
    for (int j = 0; j < nb; ++j) {
      const double c = joint[i * nb + j];
      if (c > 0) mi += c / total * std::log(c * total / (pa[i] * pb[j]));
    }
  }
  return mi;
}

// Best normalized score with `rows_axis` equipartitioned.
double orientation(const std::vector<double>& cols_axis, const std::vector<double>& rows_axis,
                   int max_cols, int max_rows, int bound) {
  std::vector<double> distinct = cols_axis;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  const int gaps = static_cast<int>(distinct.size()) - 1;
  double best = 0.0;
  for (int l = 2; l <= max_rows; ++l) {
    const auto rows = lower_bin_equipartition(rows_axis, l);
    for (int k = 2; k <= std::min(l, max_cols); ++k) {
      if (k * l >= bound) continue;
      double top = 0.0;
      // Every choice of at most k-1 cut gaps.
      for (int cuts = 1; cuts <= std::min(k - 1, gaps); ++cuts) {
        std::vector<int> pick(cuts);
        std::iota(pick.begin(), pick.end(), 0);
        for (;;) {
          std::vector<int> cols(cols_axis.size());
          for (std::size_t s = 0; s < cols_axis.size(); ++s) {
            int c = 0;
            for (int g : pick) {
              if (cols_axis[s] > distinct[g]) ++c;
            }
            cols[s] = c;
          }
          top = std::max(top, mi_nats(cols, cuts + 1, rows, l));
          int q = cuts - 1;
          while (q >= 0 && pick[q] == gaps - cuts + q) --q;
          if (q < 0) break;
          ++pick[q];
          for (int r = q + 1; r < cuts; ++r) pick[r] = pick[r - 1] + 1;
        }
      }
      best = std::max(best, top / std::log(static_cast<double>(k)));
    }
  }
  return best;
}

}  // namespace

double mic_brute_force(const std::vector<double>& x, const std::vector<double>& y, int max_k,
                       int max_l, double b_exponent) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("bad sample sizes");
  if (x.size() > 30) throw std::invalid_argument("brute force limited to 30 samples");
  if (max_k * max_l > 16) throw std::invalid_argument("brute force limited to k*l <= 16");
  const double raw = std::pow(static_cast<double>(x.size()), b_exponent);
  const int bound = std::max(4, static_cast<int>(std::ceil(raw - 1e-9)));
  const double a = orientation(x, y, max_k, max_l, bound);
  const double b = orientation(y, x, max_k, max_l, bound);
  return std::min(1.0, std::max(a, b));
}

OracleReport crosscheck(const CoalitionalValueSpec& spec, int trials, std::uint64_t seed,
                        int max_n) {
  if (max_n < 2 || max_n > 8) throw std::invalid_argument("max_n must lie in 2..8");
  std::optional<CoalitionalKind> ref;
  if (spec.kind() != CoalitionalKind::kCustom) {
    ref = spec.kind();
  } else {
    const std::string o = spec.outer().name, i = spec.inner().name;
    const bool mq = spec.family() == IntermediateFamily::kModifiedQuotient;
    if (o == "shapley" && i == "shapley") {
      ref = mq ? CoalitionalKind::kOwen : CoalitionalKind::kTwoStepShapley;
    } else if (o == "banzhaf" && i == "banzhaf" && mq) {
      ref = CoalitionalKind::kBanzhafOwen;
    } else if (o == "banzhaf" && i == "shapley" && mq) {
      ref = CoalitionalKind::kSymmetricBanzhaf;
    }
  }
  const bool check_qp = spec.quotient_property() &&
                        (spec.outer().name == "shapley" || spec.outer().name == "banzhaf");

  OracleReport rep;
  Draw draw(seed);
  // Only deviations above this are kept as witnesses.
  constexpr double kWitnessThreshold = 1e-10;
  auto record = [&](double dev, const Game& v, const Blocks& p, int player,
                    const std::string& note) {
    ++rep.comparisons;
    if (std::isnan(dev)) dev = INFINITY;
    if (dev <= rep.max_abs_deviation) return;
    rep.max_abs_deviation = dev;
    if (dev > kWitnessThreshold) rep.witness = OracleWitness{v, p, player, note};
  };
  for (int t = 0; t < trials; ++t) {
    const int n = 2 + draw.below(max_n - 1);
    std::vector<double> table(std::size_t{1} << n);
    for (double& x : table) x = 2.0 * draw.unit() - 1.0;
    if (t % 2 == 0) table[0] = 0.0;
    const Game v = Game::dense(n, table);
    for (const Blocks& p : enumerate_partitions(n, 4)) {
      const Partition part = Partition::from_blocks(n, p);
      const auto direct = coalitional_value(spec, v, part);
      const auto two_step = two_step_evaluate(spec, v, part);
      std::vector<double> reference;
      if (ref) reference = reference_value(*ref, v, p);
      for (int i = 0; i < n; ++i) {
        record(std::abs(direct[i] - two_step[i]), v, p, i, "direct vs two-step");
        if (ref) record(std::abs(direct[i] - reference[i]), v, p, i, "direct vs reference");
      }
      if (check_qp) {
        const Game q = quotient_copy(v, p);
        const auto h1 = spec.outer().name == "shapley" ? shapley_by_permutations(q)
                                                      : banzhaf_by_enumeration(q);
        for (std::size_t j = 0; j < p.size(); ++j) {
          double sum = 0.0;
          for (int i : p[j]) sum += direct[i];
          record(std::abs(sum - h1[j]), v, p, p[j].front(), "block sum vs quotient value");
        }
      }
    }
  }
  return rep;
}

std::string to_json(const OracleReport& r) {
  nlohmann::json j{{"max_abs_deviation", r.max_abs_deviation}, {"comparisons", r.comparisons}};
  if (r.witness) {
    const Game d = r.witness->game.materialize();
    const auto t = d.table();
    j["witness"] = {{"game", {{"n", d.size()}, {"values", std::vector<double>(t.begin(), t.end())}}},
                    {"partition", r.witness->partition},
                    {"player", r.witness->player},
                    {"note", r.witness->note}};
  }
  return j.dump(2);
}

}  // namespace coalex::oracle
