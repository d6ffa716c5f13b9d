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

#include "coalex/gaussian.hpp"

#include "coalex/error.hpp"

namespace coalex {

namespace {

Eigen::MatrixXd sym_matrix(const QuadraticForm& q) {
  Eigen::MatrixXd a(q.n, q.n);
  for (int i = 0; i < q.n; ++i) {
    for (int j = 0; j < q.n; ++j) a(i, j) = 0.5 * (q.a[i * q.n + j] + q.a[j * q.n + i]);
  }
  return a;
}

Eigen::VectorXd vec(const QuadraticForm& q) {
  Eigen::VectorXd b(q.n);
  for (int i = 0; i < q.n; ++i) b(i) = q.b[i];
  return b;
}

}  // namespace

GaussianModel::GaussianModel(Eigen::MatrixXd sigma) : sigma_(std::move(sigma)) {
  if (sigma_.rows() != sigma_.cols() || sigma_.rows() < 1) {
    throw_invalid("covariance must be square");
  }
  if ((sigma_ - sigma_.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw_invalid("covariance must be symmetric");
  }
  Eigen::LDLT<Eigen::MatrixXd> ldlt(sigma_);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
      (ldlt.vectorD().array() <= 1e-14).any()) {
    throw_invalid("covariance must be positive definite");
  }
}

QuadraticForm push_forward(const QuadraticForm& q, const Eigen::MatrixXd& k,
                           const Eigen::MatrixXd& c) {
  const Eigen::MatrixXd a = sym_matrix(q);
  const Eigen::VectorXd b = vec(q);
  const Eigen::MatrixXd ak = k.transpose() * a * k;
  const Eigen::VectorXd bk = k.transpose() * b;
  QuadraticForm out(q.n);
  out.c = q.c + (a * c).trace();
  for (int i = 0; i < q.n; ++i) {
    out.b[i] = bk(i);
    for (int j = 0; j < q.n; ++j) out.a[i * q.n + j] = 0.5 * (ak(i, j) + ak(j, i));
  }
  return out;
}

void GaussianModel::condition(Mask s, Eigen::MatrixXd& mean_map, Eigen::MatrixXd& cov) const {
  const int n = dimension();
  std::vector<int> in, out;
  for (int i = 0; i < n; ++i) (contains(s, i) ? in : out).push_back(i);
  mean_map = Eigen::MatrixXd::Zero(n, n);
  cov = Eigen::MatrixXd::Zero(n, n);
  for (int i : in) mean_map(i, i) = 1.0;
  if (out.empty()) return;
  if (in.empty()) {
    cov = sigma_;
    return;
  }
  const int a = static_cast<int>(in.size()), b = static_cast<int>(out.size());
  Eigen::MatrixXd s_aa(a, a), s_ba(b, a), s_bb(b, b);
  for (int p = 0; p < a; ++p) {
    for (int q = 0; q < a; ++q) s_aa(p, q) = sigma_(in[p], in[q]);
  }
  for (int p = 0; p < b; ++p) {
    for (int q = 0; q < a; ++q) s_ba(p, q) = sigma_(out[p], in[q]);
    for (int q = 0; q < b; ++q) s_bb(p, q) = sigma_(out[p], out[q]);
  }
  const Eigen::LDLT<Eigen::MatrixXd> solver(s_aa);
  const Eigen::MatrixXd gain = solver.solve(s_ba.transpose()).transpose();  // b x a
  const Eigen::MatrixXd ccov = s_bb - gain * s_ba.transpose();
  for (int p = 0; p < b; ++p) {
    for (int q = 0; q < a; ++q) mean_map(out[p], in[q]) = gain(p, q);
    for (int q = 0; q < b; ++q) cov(out[p], out[q]) = 0.5 * (ccov(p, q) + ccov(q, p));
  }
}

QuadraticForm GaussianModel::conditional_expectation(const QuadraticForm& q, Mask s) const {
  if (q.n != dimension()) throw_invalid("form and covariance differ in dimension");
  Eigen::MatrixXd k, c;
  condition(s, k, c);
  return push_forward(q, k, c);
}

QuadraticForm GaussianModel::marginal_expectation(const QuadraticForm& q, Mask s) const {
  if (q.n != dimension()) throw_invalid("form and covariance differ in dimension");
  const int n = dimension();
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (contains(s, i)) k(i, i) = 1.0;
    for (int j = 0; j < n; ++j) {
      if (!contains(s, i) && !contains(s, j)) c(i, j) = sigma_(i, j);
    }
  }
  return push_forward(q, k, c);
}

double GaussianModel::mean(const QuadraticForm& q) const {
  return q.c + (sym_matrix(q) * sigma_).trace();
}

double GaussianModel::variance(const QuadraticForm& q) const {
  const Eigen::MatrixXd as = sym_matrix(q) * sigma_;
  const Eigen::VectorXd b = vec(q);
  return b.dot(sigma_ * b) + 2.0 * (as * as).trace();
}

double GaussianModel::second_moment(const QuadraticForm& q) const {
  const double m = mean(q);
  return variance(q) + m * m;
}

}  // namespace coalex
