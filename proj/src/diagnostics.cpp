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

#include "coalex/diagnostics.hpp"

#include <cmath>

#include "coalex/dataset.hpp"
#include "coalex/error.hpp"
#include "coalex/values.hpp"

namespace coalex {

namespace {

double weighted_norm(const ExplanationMatrix& m, const std::vector<double>& a,
                     const std::vector<double>* b, std::size_t width, std::size_t col) {
  double acc = 0.0;
  for (std::size_t r = 0; r < m.samples; ++r) {
    double d = a[r * width + col];
    if (b) d -= (*b)[r * width + col];
    acc += m.weights[r] * d * d;
  }
  return std::sqrt(acc);
}

}  // namespace

StabilityReport::Energy explanation_energy(const ExplanationMatrix& m) {
  StabilityReport::Energy e;
  for (std::size_t r = 0; r < m.samples; ++r) {
    const double d = m.prediction[r] - m.baseline[r];
    e.model += m.weights[r] * d * d;
  }
  const int n = m.features(), k = m.blocks();
  for (int i = 0; i < n; ++i) e.individual += std::pow(weighted_norm(m, m.individual, nullptr, n, i), 2);
  for (int j = 0; j < k; ++j) {
    e.group += std::pow(weighted_norm(m, m.group, nullptr, k, j), 2);
    e.quotient += std::pow(weighted_norm(m, m.quotient, nullptr, k, j), 2);
  }
  if (e.model > 0.0) {
    e.individual_ratio = e.individual / e.model;
    e.quotient_ratio = e.quotient / e.model;
  }
  return e;
}

StabilityReport stability_report(const ExplanationMatrix& a, const ExplanationMatrix& b) {
  if (a.samples != b.samples || a.meta.data_hash != b.meta.data_hash) {
    throw_invalid("explanations were computed on different samples");
  }
  if (a.meta.background_hash != b.meta.background_hash) {
    throw_invalid("explanations use different background datasets");
  }
  if (!(a.partition == b.partition)) {
    throw_invalid("explanations use different partitions: " + to_string(a.partition) +
                  " vs " + to_string(b.partition));
  }
  StabilityReport rep;
  rep.feature_labels = a.feature_labels;
  rep.block_labels = a.block_labels;
  double acc = 0.0;
  for (std::size_t r = 0; r < a.samples; ++r) {
    const double d = a.prediction[r] - b.prediction[r];
    acc += a.weights[r] * d * d;
  }
  rep.model_difference_norm = std::sqrt(acc);
  const int n = a.features(), k = a.blocks();
  for (int i = 0; i < n; ++i) {
    rep.individual_difference.push_back(weighted_norm(a, a.individual, &b.individual, n, i));
  }
  for (int j = 0; j < k; ++j) {
    double rss = 0.0;
    for (int i : members(a.partition.block(j))) rss += std::pow(rep.individual_difference[i], 2);
    rep.block_rss_difference.push_back(std::sqrt(rss));
    rep.group_difference.push_back(weighted_norm(a, a.group, &b.group, k, j));
    rep.quotient_difference.push_back(weighted_norm(a, a.quotient, &b.quotient, k, j));
  }
  auto ratios = [&](const std::vector<double>& v) {
    std::vector<double> out;
    for (double x : v) out.push_back(rep.model_difference_norm > 0 ? x / rep.model_difference_norm : 0.0);
    return out;
  };
  rep.individual_ratio = ratios(rep.individual_difference);
  rep.group_ratio = ratios(rep.group_difference);
  rep.quotient_ratio = ratios(rep.quotient_difference);
  rep.energy_a = explanation_energy(a);
  rep.energy_b = explanation_energy(b);
  return rep;
}

namespace {

ExplanationMatrix marginal_shapley(const Dataset& points, const Model& f) {
  ExplainOptions opts;
  opts.value = "shapley";
  return explain(points, &points, f, opts);
}

RectangleModel unit_corner() {
  return RectangleModel({{0, 0.5, 1.5}, {1, -0.5, 0.5}}, 2);
}

}  // namespace

TwoPointWitness two_point_witness() {
  const Dataset points(2, 2, {0.0, 0.0, 1.0, 1.0});
  const RectangleModel f = unit_corner();
  const ExplanationMatrix m = marginal_shapley(points, f);
  TwoPointWitness w;
  double acc = 0.0;
  for (std::size_t r = 0; r < m.samples; ++r) acc += m.weights[r] * m.prediction[r] * m.prediction[r];
  w.model_norm = std::sqrt(acc);
  for (int i = 0; i < 2; ++i) w.feature_norms.push_back(weighted_norm(m, m.individual, nullptr, 2, i));
  return w;
}

std::vector<BlowupRow> rectangle_blowup(const std::vector<double>& ps) {
  const RectangleModel f = unit_corner();
  std::vector<BlowupRow> rows;
  for (double p : ps) {
    if (!(p > 0.0 && p < 1.0)) throw_invalid("rectangle probability must lie in (0, 1)");
    Dataset points(3, 2, {0.0, 0.0, 1.0, 1.0, 1.0, 0.0});
    points.set_weights({(1.0 - p) / 2.0, (1.0 - p) / 2.0, p});
    const ExplanationMatrix m = marginal_shapley(points, f);
    const StabilityReport::Energy e = explanation_energy(m);
    rows.push_back({p, e.model, e.individual, e.individual_ratio});
  }
  return rows;
}

EnergyCheck conditional_shapley_energy(const LatentLinearFamily& family,
                                       const QuadraticForm& q) {
  const int n = family.dimension();
  if (q.n != n) throw_invalid("model arity differs from family dimension");
  const std::vector<QuadraticForm> forms = family.conditional_forms(q);
  const GaussianModel& g = family.gaussian();
  EnergyCheck out;
  for (int i = 0; i < n; ++i) {
    QuadraticForm phi(n);
    for (Mask s = 0; s < forms.size(); ++s) {
      if (contains(s, i)) continue;
      QuadraticForm d = forms[s | bit(i)];
      QuadraticForm neg = forms[s];
      d += neg.scale(-1.0);
      phi += d.scale(shapley_weight(cardinality(s), n));
    }
    out.explanation_energy += g.second_moment(phi);
  }
  out.model_energy = g.variance(q);
  return out;
}

}  // namespace coalex
