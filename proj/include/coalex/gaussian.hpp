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

#ifndef COALEX_GAUSSIAN_HPP_
#define COALEX_GAUSSIAN_HPP_

#include <vector>

#include <Eigen/Dense>

#include "coalex/model.hpp"
#include "coalex/player_set.hpp"

namespace coalex {

// Zero-mean Gaussian vector X with covariance sigma. Expectations of
// quadratic forms under conditioning or marginal replacement are again
// quadratic forms in x.
class GaussianModel {
 public:
  explicit GaussianModel(Eigen::MatrixXd sigma);

  int dimension() const { return static_cast<int>(sigma_.rows()); }
  const Eigen::MatrixXd& covariance() const { return sigma_; }

  // x -> E[q(X) | X_S = x_S].
  QuadraticForm conditional_expectation(const QuadraticForm& q, Mask s) const;
  // x -> E[q(x_S, X_{-S})] with X_{-S} drawn from its marginal.
  QuadraticForm marginal_expectation(const QuadraticForm& q, Mask s) const;

  // Conditional mean matrix and covariance of X given X_S.
  void condition(Mask s, Eigen::MatrixXd& mean_map, Eigen::MatrixXd& cov) const;

  double mean(const QuadraticForm& q) const;
  double second_moment(const QuadraticForm& q) const;
  double variance(const QuadraticForm& q) const;

 private:
  Eigen::MatrixXd sigma_;
};

// q(Kx + W) averaged over W ~ N(0, C).
QuadraticForm push_forward(const QuadraticForm& q, const Eigen::MatrixXd& k,
                           const Eigen::MatrixXd& c);

}  // namespace coalex

#endif  // COALEX_GAUSSIAN_HPP_
