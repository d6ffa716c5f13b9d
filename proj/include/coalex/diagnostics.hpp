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

#ifndef COALEX_DIAGNOSTICS_HPP_
#define COALEX_DIAGNOSTICS_HPP_

#include <string>
#include <vector>

#include "coalex/explain.hpp"
#include "coalex/model.hpp"
#include "coalex/synthetic.hpp"

namespace coalex {

// Weighted L2 norms over the samples of two explanation matrices built on
// the same data, background and structure.
struct StabilityReport {
  std::vector<std::string> feature_labels;
  std::vector<std::string> block_labels;
  double model_difference_norm = 0.0;        // ||f_A - f_B||
  std::vector<double> individual_difference;  // per feature
  std::vector<double> block_rss_difference;   // root-sum-square of the above per block
  std::vector<double> group_difference;       // per block sum
  std::vector<double> quotient_difference;    // per quotient unit
  // Each difference norm divided by the model difference norm (0 when the
  // models agree on the data).
  std::vector<double> individual_ratio;
  std::vector<double> group_ratio;
  std::vector<double> quotient_ratio;

  struct Energy {
    double model = 0.0;       // mean of (f - v(empty))^2
    double individual = 0.0;  // sum over features of mean squared attribution
    double group = 0.0;
    double quotient = 0.0;
    double individual_ratio = 0.0;  // individual / model
    double quotient_ratio = 0.0;
  };
  Energy energy_a;
  Energy energy_b;
};

StabilityReport::Energy explanation_energy(const ExplanationMatrix& m);

// Throws InvalidArgument when the matrices were not produced on the same
// samples, background and partition.
StabilityReport stability_report(const ExplanationMatrix& a, const ExplanationMatrix& b);

// Two equally likely points (0,0) and (1,1) and f = 1{x1 = 1, x2 = 0}:
// f vanishes on the support yet its marginal Shapley values do not.
struct TwoPointWitness {
  double model_norm = 0.0;
  std::vector<double> feature_norms;
};
TwoPointWitness two_point_witness();

// Mass (1-p)/2 at (0,0) and (1,1), mass p at (1,0); f is the indicator of
// (1,0). Ratio of marginal Shapley energy to model energy.
struct BlowupRow {
  double p = 0.0;
  double model_energy = 0.0;
  double explanation_energy = 0.0;
  double ratio = 0.0;
};
std::vector<BlowupRow> rectangle_blowup(const std::vector<double>& ps);

// Exact population energies of conditional Shapley values for a quadratic
// model over a Gaussian family: sum_i E phi_i(X)^2 against Var f(X).
struct EnergyCheck {
  double explanation_energy = 0.0;
  double model_energy = 0.0;
};
EnergyCheck conditional_shapley_energy(const LatentLinearFamily& family,
                                       const QuadraticForm& q);

}  // namespace coalex

#endif  // COALEX_DIAGNOSTICS_HPP_
