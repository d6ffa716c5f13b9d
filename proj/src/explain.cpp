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

#include "coalex/explain.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <unordered_map>

#include "coalex/coalitional.hpp"
#include "coalex/error.hpp"
#include "coalex/random.hpp"
#include "coalex/values.hpp"

namespace coalex {

namespace {

constexpr int kDenseMarginalLimit = 16;
constexpr std::size_t kRowsPerCall = 1 << 16;

void fill_rows(std::span<const double> x, const Dataset& bg, Mask s, double* out) {
  const std::size_t n = x.size();
  for (std::size_t r = 0; r < bg.rows(); ++r) {
    const auto b = bg.row(r);
    for (std::size_t i = 0; i < n; ++i) {
      out[r * n + i] = contains(s, static_cast<int>(i)) ? x[i] : b[i];
    }
  }
}

double weighted_mean(const Dataset& bg, std::span<const double> preds) {
  double acc = 0.0;
  for (std::size_t r = 0; r < bg.rows(); ++r) acc += bg.weight(r) * preds[r];
  return acc;
}

}  // namespace

Game empirical_marginal_game(std::span<const double> x, const Model& f, const Dataset& bg) {
  const int n = f.arity();
  if (bg.rows() == 0) throw_invalid("background dataset is empty");
  if (static_cast<int>(x.size()) != n || static_cast<int>(bg.cols()) != n) {
    throw_invalid("explicand, background and model arity differ");
  }
  const std::size_t nb = bg.rows();
  if (n <= kDenseMarginalLimit) {
    const std::size_t subsets = std::size_t{1} << n;
    const std::size_t per_call = std::max<std::size_t>(1, kRowsPerCall / nb);
    std::vector<double> vals(subsets);
    std::vector<double> rows, preds;
    for (std::size_t start = 0; start < subsets; start += per_call) {
      const std::size_t count = std::min(per_call, subsets - start);
      rows.resize(count * nb * n);
      preds.resize(count * nb);
      for (std::size_t k = 0; k < count; ++k) {
        fill_rows(x, bg, static_cast<Mask>(start + k), rows.data() + k * nb * n);
      }
      f.predict(rows, count * nb, preds);
      for (std::size_t k = 0; k < count; ++k) {
        vals[start + k] = weighted_mean(bg, std::span<const double>(preds).subspan(k * nb, nb));
      }
    }
    return Game::dense(n, std::move(vals));
  }
  struct Memo {
    std::mutex mu;
    std::unordered_map<Mask, double> values;
  };
  auto memo = std::make_shared<Memo>();
  auto xs = std::make_shared<std::vector<double>>(x.begin(), x.end());
  auto background = std::make_shared<Dataset>(bg);
  const Model* model = &f;
  return Game::lazy(n, [memo, xs, background, model](Mask s) {
    {
      std::lock_guard<std::mutex> lock(memo->mu);
      auto it = memo->values.find(s);
      if (it != memo->values.end()) return it->second;
    }
    const std::size_t rows_n = background->rows();
    std::vector<double> rows(rows_n * xs->size()), preds(rows_n);
    fill_rows(*xs, *background, s, rows.data());
    model->predict(rows, rows_n, preds);
    const double v = weighted_mean(*background, preds);
    std::lock_guard<std::mutex> lock(memo->mu);
    memo->values.emplace(s, v);
    return v;
  });
}

std::string to_string(GameKind kind) { return kind == GameKind::kMarginal ? "ME" : "CE"; }

std::string to_string(GameMethod method) {
  switch (method) {
    case GameMethod::kAuto: return "auto";
    case GameMethod::kEmpirical: return "empirical";
    case GameMethod::kClosedForm: return "closed-form";
    case GameMethod::kMonteCarlo: return "monte-carlo";
  }
  return "auto";
}

GameKind game_kind_from_string(const std::string& s) {
  if (s == "ME" || s == "me" || s == "marginal") return GameKind::kMarginal;
  if (s == "CE" || s == "ce" || s == "conditional") return GameKind::kConditional;
  throw InputError("unknown game '" + s + "' (expected ME or CE)");
}

GameMethod game_method_from_string(const std::string& s) {
  if (s == "auto") return GameMethod::kAuto;
  if (s == "empirical") return GameMethod::kEmpirical;
  if (s == "closed" || s == "closed-form") return GameMethod::kClosedForm;
  if (s == "mc" || s == "monte-carlo") return GameMethod::kMonteCarlo;
  throw InputError("unknown game method '" + s + "'");
}

namespace {

MonteCarloGame exact(Game g) {
  std::vector<double> se(std::size_t{1} << g.size(), 0.0);
  return {std::move(g), std::move(se)};
}

const SyntheticFamily& need_family(const ExplainOptions& opts) {
  if (!opts.family) throw_invalid("this game needs a synthetic family");
  return *opts.family;
}

MonteCarloGame build_game_impl(std::span<const double> x, const Dataset* background,
                               const Model& f, const ExplainOptions& opts,
                               std::uint64_t stream, GameMethod& used) {
  if (opts.game == GameKind::kMarginal) {
    GameMethod m = opts.method;
    if (m == GameMethod::kAuto) m = background ? GameMethod::kEmpirical : GameMethod::kClosedForm;
    used = m;
    if (m == GameMethod::kEmpirical) {
      if (!background) throw_invalid("the empirical marginal game needs a background dataset");
      return exact(empirical_marginal_game(x, f, *background));
    }
    if (m == GameMethod::kClosedForm) {
      return exact(need_family(opts).marginal_population_game(x, f));
    }
    throw_invalid("marginal games are built from a background dataset or in closed form");
  }
  const SyntheticFamily& fam = need_family(opts);
  const std::uint64_t seed = mix_seed(opts.seed, stream);
  switch (opts.method) {
    case GameMethod::kEmpirical:
      throw_invalid("conditional games have no empirical estimator here");
    case GameMethod::kClosedForm:
      used = GameMethod::kClosedForm;
      return exact(fam.conditional_game(x, f));
    case GameMethod::kMonteCarlo:
      used = GameMethod::kMonteCarlo;
      return fam.conditional_game_mc(x, f, opts.mc_draws, seed);
    case GameMethod::kAuto:
      try {
        used = GameMethod::kClosedForm;
        return exact(fam.conditional_game(x, f));
      } catch (const Unsupported&) {
        used = GameMethod::kMonteCarlo;
        return fam.conditional_game_mc(x, f, opts.mc_draws, seed);
      }
  }
  throw_invalid("unknown game method");
}

// Maps a game to the concatenated (individual, group, quotient) outputs of
// every requested cut level. Linear in the game.
class OutputMap {
 public:
  OutputMap(const ExplainOptions& opts, int n) : n_(n) {
    if (opts.value == "shapley") {
      single_ = shapley_value();
      efficient_ = true;
    } else if (opts.value == "banzhaf") {
      single_ = banzhaf_value();
    } else {
      spec_ = CoalitionalValueSpec::by_name(opts.value);
      efficient_ = spec_->efficient();
      qp_ = spec_->quotient_property();
    }
    if (opts.tree) {
      if (opts.partition) throw_invalid("give either a partition or a tree, not both");
      if (opts.tree->num_players() != n) throw_invalid("tree size differs from model arity");
      tree_ = opts.tree;
      std::vector<double> alphas = opts.alphas.empty() ? std::vector<double>{0.0} : opts.alphas;
      for (double a : alphas) {
        alphas_.push_back(a);
        partitions_.push_back(tree_->cut(a));
      }
    } else {
      if (opts.alphas.size() > 1) throw_invalid("cut levels need a tree");
      Partition p = opts.partition ? *opts.partition : Partition::singletons(n);
      if (p.num_players() != n) throw_invalid("partition size differs from model arity");
      partitions_.push_back(std::move(p));
    }
    for (const auto& p : partitions_) {
      offsets_.push_back(width_);
      width_ += n + 2 * p.num_blocks();
    }
  }

  std::size_t width() const { return width_; }
  std::size_t offset(std::size_t level) const { return offsets_[level]; }
  std::size_t levels() const { return partitions_.size(); }
  const Partition& partition(std::size_t level) const { return partitions_[level]; }
  std::optional<double> alpha(std::size_t level) const {
    if (alphas_.empty()) return std::nullopt;
    return alphas_[level];
  }
  bool efficient() const { return efficient_; }
  bool quotient_property() const { return qp_; }
  std::string structure(const ExplainOptions& opts) const {
    return tree_ ? "tree" : (opts.partition ? "partition" : "none");
  }

  void apply(const Game& v, double* out) const {
    if (tree_ && spec_) {
      const RecursiveValues rv = recursive_values(*tree_, v, *spec_);
      for (std::size_t l = 0; l < levels(); ++l) {
        const TreeGroupExplanation gx = group_explanation_at(*tree_, rv, alphas_[l]);
        write(l, rv.leaf_values, gx.leaf_sums, gx.node_values, out);
      }
      return;
    }
    if (spec_) {
      const CoalitionalResult r = evaluate_coalitional(*spec_, v, partitions_[0]);
      write(0, r.per_player, r.per_block, r.quotient, out);
      return;
    }
    const ValueVector ind = single_->all(v);
    for (std::size_t l = 0; l < levels(); ++l) {
      const Partition& p = partitions_[l];
      std::vector<double> sums(p.num_blocks(), 0.0);
      for (int i = 0; i < n_; ++i) sums[p.block_of(i)] += ind[i];
      const ValueVector quo = single_->all(quotient_game(v, p));
      write(l, ind, sums, quo, out);
    }
  }

 private:
  void write(std::size_t level, const std::vector<double>& ind, const std::vector<double>& grp,
             const std::vector<double>& quo, double* out) const {
    double* o = out + offsets_[level];
    std::copy(ind.begin(), ind.end(), o);
    std::copy(grp.begin(), grp.end(), o + n_);
    std::copy(quo.begin(), quo.end(), o + n_ + grp.size());
  }

  int n_;
  std::optional<GameValue> single_;
  std::optional<CoalitionalValueSpec> spec_;
  std::optional<PartitionTree> tree_;
  std::vector<double> alphas_;
  std::vector<Partition> partitions_;
  std::vector<std::size_t> offsets_;
  std::size_t width_ = 0;
  bool efficient_ = false;
  bool qp_ = false;
};

constexpr int kStdErrorLimit = 10;

std::string block_label(const Partition& p, int j, const std::vector<std::string>& names) {
  std::string s;
  for (int i : members(p.block(j))) {
    if (!s.empty()) s += "+";
    s += names[i];
  }
  return s;
}

}  // namespace

MonteCarloGame build_game(std::span<const double> x, const Dataset* background,
                          const Model& f, const ExplainOptions& opts, std::uint64_t stream) {
  GameMethod used = GameMethod::kAuto;
  return build_game_impl(x, background, f, opts, stream, used);
}

std::vector<ExplanationMatrix> explain_sweep(const Dataset& data, const Dataset* background,
                                             const Model& f, const ExplainOptions& opts) {
  const int n = f.arity();
  if (static_cast<int>(data.cols()) != n) {
    throw_invalid("data has " + std::to_string(data.cols()) + " columns but the model takes " +
                  std::to_string(n));
  }
  if (n > kMaxPlayers) throw_invalid("too many predictors");
  const OutputMap map(opts, n);
  const std::size_t rows = data.rows();
  const std::size_t width = map.width();

  std::vector<double> out(rows * width, 0.0), se(rows * width, 0.0);
  std::vector<double> prediction(rows), baseline(rows), gap(rows, 0.0);
  std::vector<std::exception_ptr> errors(rows);
  std::vector<GameMethod> used(rows, GameMethod::kAuto);
  std::atomic<bool> any_se{false};
  std::atomic<std::size_t> next{0};

  auto work = [&]() {
    std::vector<double> basis_out(width);
    for (;;) {
      const std::size_t r = next.fetch_add(1);
      if (r >= rows) return;
      try {
        const MonteCarloGame mc = build_game_impl(data.row(r), background, f, opts, r, used[r]);
        const Game& v = mc.game;
        prediction[r] = v(v.grand());
        baseline[r] = v.empty_value();
        double* o = out.data() + r * width;
        map.apply(v, o);
        const bool sampled =
            std::any_of(mc.std_error.begin(), mc.std_error.end(), [](double e) { return e > 0; });
        if (sampled && n <= kStdErrorLimit) {
          any_se = true;
          double* s_out = se.data() + r * width;
          std::vector<double> basis(std::size_t{1} << n, 0.0);
          for (std::size_t s = 0; s < basis.size(); ++s) {
            if (mc.std_error[s] <= 0.0) continue;
            basis[s] = mc.std_error[s];
            map.apply(Game::dense(n, basis), basis_out.data());
            basis[s] = 0.0;
            for (std::size_t k = 0; k < width; ++k) s_out[k] += basis_out[k] * basis_out[k];
          }
          for (std::size_t k = 0; k < width; ++k) s_out[k] = std::sqrt(s_out[k]);
        }
        if (map.efficient()) {
          double sum = 0.0;
          for (int i = 0; i < n; ++i) sum += o[i];
          gap[r] = std::abs(sum - (prediction[r] - baseline[r]));
          if (opts.check_efficiency &&
              gap[r] > opts.efficiency_tolerance * std::max(1.0, std::abs(prediction[r]))) {
            throw InvariantError("efficiency violated at sample " + std::to_string(r) +
                                 ": attributions sum to " + format_double(sum) +
                                 " but f(x) - v(empty) = " +
                                 format_double(prediction[r] - baseline[r]));
          }
        }
      } catch (...) {
        errors[r] = std::current_exception();
      }
    }
  };
  const int workers = std::max(1, std::min<int>(opts.workers, static_cast<int>(rows)));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  ExplanationMeta meta;
  meta.game = to_string(opts.game);
  meta.method = rows > 0 ? to_string(used[0]) : to_string(opts.method);
  meta.value = opts.value;
  meta.structure = map.structure(opts);
  meta.model = f.describe();
  meta.data_hash = data.content_hash();
  meta.background_hash = background ? background->content_hash() : "";
  meta.family = opts.family ? opts.family->name() : "";
  meta.efficient = map.efficient();
  meta.quotient_property = map.quotient_property();

  std::vector<std::string> names = data.names();
  std::vector<double> weights(rows);
  for (std::size_t r = 0; r < rows; ++r) weights[r] = data.weight(r);
  const double max_gap = rows ? *std::max_element(gap.begin(), gap.end()) : 0.0;

  std::vector<ExplanationMatrix> result;
  for (std::size_t l = 0; l < map.levels(); ++l) {
    ExplanationMatrix m;
    m.samples = rows;
    m.partition = map.partition(l);
    m.feature_labels = names;
    const int blocks = m.partition.num_blocks();
    for (int j = 0; j < blocks; ++j) m.block_labels.push_back(block_label(m.partition, j, names));
    m.prediction = prediction;
    m.baseline = baseline;
    m.weights = weights;
    m.max_efficiency_gap = max_gap;
    m.meta = meta;
    m.meta.alpha = map.alpha(l);
    const std::size_t off = map.offset(l);
    auto slice = [&](const std::vector<double>& src, std::size_t begin, int count) {
      std::vector<double> dst(rows * count);
      for (std::size_t r = 0; r < rows; ++r) {
        std::copy_n(src.begin() + r * width + off + begin, count, dst.begin() + r * count);
      }
      return dst;
    };
    m.individual = slice(out, 0, n);
    m.group = slice(out, n, blocks);
    m.quotient = slice(out, n + blocks, blocks);
    if (any_se) {
      m.individual_se = slice(se, 0, n);
      m.group_se = slice(se, n, blocks);
      m.quotient_se = slice(se, n + blocks, blocks);
    }
    result.push_back(std::move(m));
  }
  return result;
}

ExplanationMatrix explain(const Dataset& data, const Dataset* background, const Model& f,
                          const ExplainOptions& opts) {
  if (opts.alphas.size() > 1) throw_invalid("use explain_sweep for several cut levels");
  return std::move(explain_sweep(data, background, f, opts).front());
}

}  // namespace coalex
