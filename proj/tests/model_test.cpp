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

#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "coalex/error.hpp"
#include "coalex/gaussian.hpp"
#include "coalex/model.hpp"
#include "coalex/random.hpp"

namespace coalex {
namespace {

std::string scorer(const std::string& args) {
  return std::string("cmd:") + COALEX_FAKE_SCORER + " " + args;
}

std::vector<double> grid_rows(std::size_t rows, int arity) {
  std::vector<double> out;
  for (std::size_t r = 0; r < rows; ++r) {
    for (int c = 0; c < arity; ++c) out.push_back(0.1 * static_cast<double>(r) - c / 3.0);
  }
  return out;
}

TEST(Polynomial, ParseAndPredict) {
  const auto f = PolynomialModel::parse("3*x2*x3 - 0.5*x1^2 + 2");
  EXPECT_EQ(f.arity(), 3);
  EXPECT_EQ(f.degree(), 2);
  const std::vector<double> x{2.0, -1.0, 4.0};
  EXPECT_DOUBLE_EQ(f.predict_one(x), 3 * -4.0 - 2.0 + 2.0);
  EXPECT_EQ(PolynomialModel::parse("x1", 4).arity(), 4);
  EXPECT_DOUBLE_EQ(PolynomialModel::parse("1e-1*x1 + 2.5e+1").predict_one(std::span(x).first(1)), 25.2);
  const auto g = PolynomialModel::parse(f.describe().substr(5));
  EXPECT_DOUBLE_EQ(g.predict_one(x), f.predict_one(x));
}

TEST(Polynomial, ParseErrors) {
  EXPECT_THROW(PolynomialModel::parse(""), InputError);
  EXPECT_THROW(PolynomialModel::parse("x0"), InputError);
  EXPECT_THROW(PolynomialModel::parse("3*y2"), InputError);
  EXPECT_THROW(PolynomialModel::parse("x1 x2"), InputError);
  EXPECT_THROW(PolynomialModel::parse("x1 +"), InputError);
  EXPECT_THROW(PolynomialModel::parse("x3", 2), InputError);
}

TEST(Polynomial, QuadraticForm) {
  const auto f = PolynomialModel::parse("1 + 2*x1 + 3*x1*x2 - x2^2", 2);
  const auto q = f.quadratic();
  ASSERT_TRUE(q.has_value());
  Rng rng(1);
  for (int k = 0; k < 20; ++k) {
    const std::vector<double> x{rng.normal(), rng.normal()};
    EXPECT_NEAR((*q)(x), f.predict_one(x), 1e-12);
  }
  EXPECT_DOUBLE_EQ(q->a[1], q->a[2]);
  EXPECT_FALSE(PolynomialModel::parse("x1^3").quadratic().has_value());
  EXPECT_FALSE(PolynomialModel::parse("x1*x2*x3").quadratic().has_value());
}

TEST(Rectangle, OpenBox) {
  const auto r = RectangleModel::parse("1:0.5:1.5,2:-0.5:0.5", 2);
  EXPECT_EQ(r.predict_one(std::vector<double>{1.0, 0.0}), 1.0);
  EXPECT_EQ(r.predict_one(std::vector<double>{0.5, 0.0}), 0.0);
  EXPECT_EQ(r.predict_one(std::vector<double>{1.0, 0.6}), 0.0);
  EXPECT_THROW(RectangleModel::parse("1:0.5", 2), InputError);
  EXPECT_THROW(RectangleModel::parse("", 2), InputError);
  EXPECT_THROW(RectangleModel::parse("3:0:1", 2), InputError);
}

TEST(Factory, KindsAndDifference) {
  EXPECT_EQ(make_model("poly:x1*x2", 2)->arity(), 2);
  EXPECT_EQ(make_model("bilinear:x1*x2", 3)->arity(), 3);
  EXPECT_EQ(make_model("rect:1:0:1", 1)->describe().substr(0, 5), "rect:");
  EXPECT_THROW(make_model("x1", 1), InputError);
  EXPECT_THROW(make_model("tree:x1", 1), InputError);
  std::shared_ptr<const Model> a = make_model("poly:x1 + x2", 2);
  std::shared_ptr<const Model> b = make_model("poly:x2", 2);
  const auto d = difference_model(a, b);
  EXPECT_DOUBLE_EQ(d->predict_one(std::vector<double>{3.0, 7.0}), 3.0);
  std::shared_ptr<const Model> c = make_model("poly:x1", 1);
  EXPECT_THROW(difference_model(a, c), InvalidArgument);
}

TEST(Subprocess, ScoresInBatches) {
  const auto f = make_model(scorer("product 2 3"), 3, 7);
  const auto rows = grid_rows(50, 3);
  const auto got = f->predict_all(rows, 50);
  for (std::size_t r = 0; r < 50; ++r) {
    EXPECT_DOUBLE_EQ(got[r], rows[r * 3 + 1] * rows[r * 3 + 2]);
  }
  // The process stays up between calls.
  const auto again = f->predict_all(rows, 50);
  EXPECT_EQ(again, got);
}

TEST(Subprocess, RoundTripsFullPrecision) {
  const auto f = make_model(scorer("sum"), 1);
  const std::vector<double> x{0.1, 1.0 / 3.0, -2.5e-300, 1e300};
  EXPECT_EQ(f->predict_all(x, 4), x);
}

TEST(Subprocess, ProtocolErrors) {
  const auto rows = grid_rows(20, 2);
  for (const char* mode : {"garbage-at 5", "exit-at 3", "extra", "nan"}) {
    const auto f = make_model(scorer(mode), 2, 7);
    EXPECT_THROW(f->predict_all(rows, 20), ProtocolError) << mode;
  }
  try {
    make_model(scorer("garbage-at 10"), 2, 8)->predict_all(rows, 20);
    FAIL();
  } catch (const ProtocolError& e) {
    EXPECT_NE(std::string(e.what()).find("batch 1, row 2"), std::string::npos) << e.what();
  }
}

TEST(Subprocess, MissingCommand) {
  const auto f = make_model("cmd:/nonexistent/scorer-binary", 2);
  const auto rows = grid_rows(4, 2);
  EXPECT_THROW(f->predict_all(rows, 4), ProtocolError);
}

TEST(Gaussian, ConditionalAndMarginalExpectations) {
  const double rho = 0.6;
  Eigen::MatrixXd s(3, 3);
  s << 1, rho, 0, rho, 1, 0, 0, 0, 1;
  const GaussianModel g(s);
  QuadraticForm q(3);  // x1 * x2
  q.a[1] = q.a[3] = 0.5;
  const std::vector<double> x{2.0, -1.0, 0.5};
  EXPECT_NEAR(g.mean(q), rho, 1e-15);
  EXPECT_NEAR(g.variance(q), 1.0 + rho * rho, 1e-12);
  EXPECT_NEAR(g.conditional_expectation(q, 0b001)(x), rho * 4.0, 1e-12);
  EXPECT_NEAR(g.marginal_expectation(q, 0b001)(x), 0.0, 1e-12);
  EXPECT_NEAR(g.conditional_expectation(q, 0b011)(x), -2.0, 1e-12);
  EXPECT_NEAR(g.conditional_expectation(q, 0)(x), rho, 1e-12);
  EXPECT_NEAR(g.marginal_expectation(q, 0)(x), rho, 1e-12);
  QuadraticForm sq(3);  // x3^2 given nothing about x3
  sq.a[8] = 1.0;
  EXPECT_NEAR(g.conditional_expectation(sq, 0b011)(x), 1.0, 1e-12);
}

TEST(Gaussian, MonteCarloAgreesWithClosedForm) {
  Eigen::MatrixXd s(2, 2);
  s << 2.0, 0.7, 0.7, 1.0;
  const GaussianModel g(s);
  QuadraticForm q(2);
  q.c = 1.0;
  q.b = {0.5, -1.0};
  q.a = {1.0, 0.25, 0.25, -0.5};
  Eigen::MatrixXd mean_map, cov;
  g.condition(0b01, mean_map, cov);
  EXPECT_NEAR(cov(1, 1), 1.0 - 0.49 / 2.0, 1e-12);
  EXPECT_NEAR(mean_map(1, 0), 0.35, 1e-12);
  Rng rng(3);
  const std::vector<double> x{1.2, 0.0};
  double sum = 0.0;
  const int draws = 200000;
  const double sd = std::sqrt(cov(1, 1));
  for (int k = 0; k < draws; ++k) {
    const std::vector<double> z{x[0], mean_map(1, 0) * x[0] + sd * rng.normal()};
    sum += q(z);
  }
  EXPECT_NEAR(sum / draws, g.conditional_expectation(q, 0b01)(x), 0.01);
}

}  // namespace
}  // namespace coalex
