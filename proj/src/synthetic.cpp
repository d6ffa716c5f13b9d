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

#include "coalex/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "coalex/dataset.hpp"
#include "coalex/error.hpp"
#include "coalex/random.hpp"

namespace coalex {

std::vector<std::string> SyntheticFamily::feature_names() const {
  std::vector<std::string> names;
  for (int i = 0; i < dimension(); ++i) names.push_back("x" + std::to_string(i + 1));
  return names;
}

Dataset SyntheticFamily::sample_with_response(std::size_t n, std::uint64_t seed) const {
  return sample(n, seed);
}

Game SyntheticFamily::conditional_game(std::span<const double>, const Model& f) const {
  throw Unsupported("no closed-form conditional game for family '" + name() +
                    "' and model '" + f.describe() +
                    "'; use the Monte Carlo conditional game instead");
}

Game SyntheticFamily::marginal_population_game(std::span<const double>,
                                               const Model& f) const {
  throw Unsupported("no closed-form marginal game for family '" + name() + "' and model '" +
                    f.describe() + "'");
}

MonteCarloGame SyntheticFamily::conditional_game_mc(std::span<const double>, const Model&,
                                                    std::size_t, std::uint64_t) const {
  throw Unsupported("family '" + name() + "' has no conditional sampler");
}

LatentLinearFamily::LatentLinearFamily(Eigen::MatrixXd loadings, Eigen::VectorXd noise,
                                       std::string name)
    : loadings_(std::move(loadings)),
      noise_(std::move(noise)),
      gaussian_(loadings_ * loadings_.transpose() +
                Eigen::MatrixXd(noise_.array().square().matrix().asDiagonal())),
      name_(std::move(name)) {
  if (noise_.size() != loadings_.rows()) throw_invalid("one noise scale per predictor");
  if (loadings_.rows() > kDenseCap) throw_invalid("too many predictors");
}

LatentLinearFamily LatentLinearFamily::correlated_pair(double rho) {
  if (!(std::abs(rho) < 1.0)) throw_invalid("rho must lie in (-1, 1)");
  Eigen::MatrixXd l(3, 2);
  l << 1.0, 0.0, rho, 0.0, 0.0, 1.0;
  Eigen::VectorXd s(3);
  s << 0.0, std::sqrt(1.0 - rho * rho), 0.0;
  return LatentLinearFamily(l, s, "correlated:" + format_double(rho));
}

LatentLinearFamily LatentLinearFamily::near_duplicates(double delta) {
  if (!(delta > 0.0)) throw_invalid("delta must be positive");
  Eigen::MatrixXd l(3, 2);
  l << 1.0, 0.0, 1.0, 0.0, 0.0, 1.0;
  Eigen::VectorXd s(3);
  s << delta, delta, 0.0;
  return LatentLinearFamily(l, s, "near-duplicates:" + format_double(delta));
}

LatentLinearFamily LatentLinearFamily::random_blocks(const std::vector<int>& block_sizes,
                                                     std::uint64_t seed) {
  int n = 0;
  for (int s : block_sizes) {
    if (s < 1) throw_invalid("block sizes must be positive");
    n += s;
  }
  Rng rng(seed);
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, static_cast<int>(block_sizes.size()));
  Eigen::VectorXd noise(n);
  int row = 0;
  for (std::size_t b = 0; b < block_sizes.size(); ++b) {
    for (int k = 0; k < block_sizes[b]; ++k, ++row) {
      const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
      l(row, static_cast<int>(b)) = sign * rng.uniform(0.5, 1.5);
      noise(row) = rng.uniform(0.3, 0.8);
    }
  }
  return LatentLinearFamily(l, noise, "random-blocks");
}

Dataset LatentLinearFamily::sample(std::size_t n, std::uint64_t seed) const {
  const int d = dimension();
  const int k = static_cast<int>(loadings_.cols());
  Rng rng(seed);
  std::vector<double> vals(n * d);
  Eigen::VectorXd z(k);
  for (std::size_t r = 0; r < n; ++r) {
    for (int q = 0; q < k; ++q) z(q) = rng.normal();
    const Eigen::VectorXd x = loadings_ * z;
    for (int i = 0; i < d; ++i) vals[r * d + i] = x(i) + noise_(i) * rng.normal();
  }
  return Dataset(n, d, std::move(vals), feature_names());
}

std::vector<QuadraticForm> LatentLinearFamily::conditional_forms(const QuadraticForm& q) const {
  std::vector<QuadraticForm> out;
  const Mask full = full_mask(dimension());
  for (Mask s = 0; s <= full; ++s) out.push_back(gaussian_.conditional_expectation(q, s));
  return out;
}

std::vector<QuadraticForm> LatentLinearFamily::marginal_forms(const QuadraticForm& q) const {
  std::vector<QuadraticForm> out;
  const Mask full = full_mask(dimension());
  for (Mask s = 0; s <= full; ++s) out.push_back(gaussian_.marginal_expectation(q, s));
  return out;
}

namespace {

std::optional<QuadraticForm> quadratic_of(const Model& f, int dim) {
  auto q = f.quadratic();
  if (q && q->n != dim) throw_invalid("model arity differs from family dimension");
  return q;
}

Game game_from_forms(const std::vector<QuadraticForm>& forms, std::span<const double> x,
                     int n) {
  std::vector<double> vals(forms.size());
  for (std::size_t s = 0; s < forms.size(); ++s) vals[s] = forms[s](x);
  return Game::dense(n, std::move(vals));
}

}  // namespace

Game LatentLinearFamily::conditional_game(std::span<const double> x, const Model& f) const {
  const auto q = quadratic_of(f, dimension());
  if (!q) return SyntheticFamily::conditional_game(x, f);
  return game_from_forms(conditional_forms(*q), x, dimension());
}

Game LatentLinearFamily::marginal_population_game(std::span<const double> x,
                                                  const Model& f) const {
  const auto q = quadratic_of(f, dimension());
  if (!q) return SyntheticFamily::marginal_population_game(x, f);
  return game_from_forms(marginal_forms(*q), x, dimension());
}

MonteCarloGame LatentLinearFamily::conditional_game_mc(std::span<const double> x,
                                                       const Model& f, std::size_t draws,
                                                       std::uint64_t seed) const {
  const int n = dimension();
  if (f.arity() != n || static_cast<int>(x.size()) != n) throw_invalid("arity mismatch");
  if (draws < 2) throw_invalid("need at least two draws");
  const Mask full = full_mask(n);
  std::vector<double> vals(std::size_t{1} << n), se(vals.size(), 0.0);
  Eigen::Map<const Eigen::VectorXd> xv(x.data(), n);
  std::vector<double> rows(draws * n), preds(draws);
  for (Mask s = 0; s <= full; ++s) {
    if (s == full) {
      vals[s] = f.predict_one(x);
      continue;
    }
    Eigen::MatrixXd k, c;
    gaussian_.condition(s, k, c);
    const Eigen::VectorXd mean = k * xv;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(c);
    const Eigen::MatrixXd l = ldlt.transpositionsP().transpose() *
                              Eigen::MatrixXd(ldlt.matrixL()) *
                              ldlt.vectorD().cwiseMax(0.0).cwiseSqrt().asDiagonal();
    Rng rng(mix_seed(seed, s));
    Eigen::VectorXd e(n);
    for (std::size_t d = 0; d < draws; ++d) {
      for (int i = 0; i < n; ++i) e(i) = rng.normal();
      const Eigen::VectorXd xd = mean + l * e;
      for (int i = 0; i < n; ++i) rows[d * n + i] = contains(s, i) ? x[i] : xd(i);
    }
    f.predict(rows, draws, preds);
    double m = 0.0;
    for (double p : preds) m += p;
    m /= static_cast<double>(draws);
    double v = 0.0;
    for (double p : preds) v += (p - m) * (p - m);
    vals[s] = m;
    se[s] = std::sqrt(v / static_cast<double>(draws - 1) / static_cast<double>(draws));
  }
  return {Game::dense(n, std::move(vals)), std::move(se)};
}

std::vector<std::string> MicTestFamily::feature_names() const {
  return {"X0", "X1", "X2", "X3", "X4", "X5", "X6"};
}

Dataset MicTestFamily::sample(std::size_t n, std::uint64_t seed) const {
  constexpr double pi = std::numbers::pi;
  Rng rng(seed);
  std::vector<double> vals(n * 7);
  for (std::size_t r = 0; r < n; ++r) {
    double* x = &vals[r * 7];
    x[0] = rng.uniform(-4.0 * pi, 4.0 * pi);
    x[1] = x[0] * x[0] + rng.normal();
    x[2] = std::sin(x[0]) + 0.25 * rng.normal();
    x[3] = 0.5 * x[0] + 0.25 * rng.normal();
    x[4] = rng.uniform(0.0, 10.0);
    const double theta = rng.uniform(0.0, 2.0 * pi);
    x[5] = 2.0 * std::cos(theta) + 0.1 * rng.normal();
    x[6] = 2.0 * std::sin(theta) + 0.1 * rng.normal();
  }
  return Dataset(n, 7, std::move(vals), feature_names());
}

PedagogicalFamily::PedagogicalFamily(double delta) : delta_(delta) {
  if (!(delta > 0.0)) throw_invalid("delta must be positive");
}

std::string PedagogicalFamily::name() const { return "pedagogical:" + format_double(delta_); }

namespace {

double pedagogical_x2_mean(double z) {
  return std::numbers::sqrt2 * std::sin(z * std::numbers::pi / 4.0);
}

double two_sided_uniform(Rng& rng) {
  const double u = rng.uniform(0.5, 1.0);
  return rng.uniform() < 0.5 ? -u : u;
}

}  // namespace

Dataset PedagogicalFamily::sample(std::size_t n, std::uint64_t seed) const {
  const Dataset full = sample_with_response(n, seed);
  return full.select_columns({0, 1, 2});
}

Dataset PedagogicalFamily::sample_with_response(std::size_t n, std::uint64_t seed) const {
  Rng rng(seed);
  std::vector<double> vals(n * 4);
  for (std::size_t r = 0; r < n; ++r) {
    double* x = &vals[r * 4];
    const double z = rng.uniform(-1.0, 1.0);
    x[0] = z + delta_ * rng.normal();
    x[1] = pedagogical_x2_mean(z) + delta_ * rng.normal();
    x[2] = two_sided_uniform(rng);
    x[3] = 3.0 * x[1] * x[2] + rng.uniform(-0.05, 0.05);
  }
  return Dataset(n, 4, std::move(vals), {"x1", "x2", "x3", "y"});
}

MonteCarloGame PedagogicalFamily::conditional_game_mc(std::span<const double> x,
                                                      const Model& f, std::size_t draws,
                                                      std::uint64_t seed) const {
  if (f.arity() != 3 || x.size() != 3) throw_invalid("pedagogical family has 3 predictors");
  if (draws < 2) throw_invalid("need at least two draws");
  std::vector<double> vals(8), se(8, 0.0);
  std::vector<double> rows(draws * 3), preds(draws), w(draws);
  for (Mask s = 0; s < 8; ++s) {
    if (s == 7) {
      vals[s] = f.predict_one(x);
      continue;
    }
    Rng rng(mix_seed(seed, s));
    for (std::size_t d = 0; d < draws; ++d) {
      const double z = rng.uniform(-1.0, 1.0);
      const double m2 = pedagogical_x2_mean(z);
      // Likelihood of the observed latent-driven coordinates.
      double logw = 0.0;
      if (contains(s, 0)) logw -= 0.5 * std::pow((x[0] - z) / delta_, 2);
      if (contains(s, 1)) logw -= 0.5 * std::pow((x[1] - m2) / delta_, 2);
      w[d] = logw;
      const double e1 = rng.normal(), e2 = rng.normal();
      const double x3 = two_sided_uniform(rng);
      rows[d * 3 + 0] = contains(s, 0) ? x[0] : z + delta_ * e1;
      rows[d * 3 + 1] = contains(s, 1) ? x[1] : m2 + delta_ * e2;
      rows[d * 3 + 2] = contains(s, 2) ? x[2] : x3;
    }
    double top = -std::numeric_limits<double>::infinity();
    for (double lw : w) top = std::max(top, lw);
    double total = 0.0;
    for (double& lw : w) {
      lw = std::exp(lw - top);
      total += lw;
    }
    f.predict(rows, draws, preds);
    double m = 0.0;
    for (std::size_t d = 0; d < draws; ++d) m += w[d] * preds[d];
    m /= total;
    double v = 0.0;
    for (std::size_t d = 0; d < draws; ++d) v += w[d] * w[d] * (preds[d] - m) * (preds[d] - m);
    vals[s] = m;
    se[s] = std::sqrt(v) / total;
  }
  return {Game::dense(3, std::move(vals)), std::move(se)};
}

std::unique_ptr<SyntheticFamily> make_family(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const bool has_arg = colon != std::string::npos;
  auto arg = [&]() {
    if (!has_arg) throw InputError("family '" + kind + "' needs a parameter");
    return parse_double(spec.substr(colon + 1));
  };
  try {
    if (kind == "mictest") return std::make_unique<MicTestFamily>();
    if (kind == "pedagogical") {
      return std::make_unique<PedagogicalFamily>(has_arg ? arg() : 0.05);
    }
    if (kind == "correlated") {
      return std::make_unique<LatentLinearFamily>(LatentLinearFamily::correlated_pair(arg()));
    }
    if (kind == "near-duplicates") {
      return std::make_unique<LatentLinearFamily>(LatentLinearFamily::near_duplicates(arg()));
    }
  } catch (const InvalidArgument& e) {
    throw InputError("family '" + spec + "': " + e.what());
  }
  throw InputError("unknown family '" + spec + "'");
}

}  // namespace coalex
