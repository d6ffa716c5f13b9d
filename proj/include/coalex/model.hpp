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

#ifndef COALEX_MODEL_HPP_
#define COALEX_MODEL_HPP_

#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace coalex {

// q(x) = c + b.x + x'Ax with A symmetric, stored row-major.
struct QuadraticForm {
  int n = 0;
  double c = 0.0;
  std::vector<double> b;
  std::vector<double> a;

  explicit QuadraticForm(int dim = 0) : n(dim), b(dim, 0.0), a(dim * dim, 0.0) {}
  double operator()(std::span<const double> x) const;
  QuadraticForm& operator+=(const QuadraticForm& o);
  QuadraticForm& scale(double s);
};

// A pure scoring function R^arity -> R.
class Model {
 public:
  virtual ~Model() = default;
  virtual int arity() const = 0;
  virtual std::string describe() const = 0;
  // `rows` holds num_rows * arity values, row-major.
  virtual void predict(std::span<const double> rows, std::size_t num_rows,
                       std::span<double> out) const = 0;
  // Exact quadratic representation when the model is a polynomial of
  // degree at most 2.
  virtual std::optional<QuadraticForm> quadratic() const { return std::nullopt; }

  double predict_one(std::span<const double> x) const;
  std::vector<double> predict_all(std::span<const double> rows, std::size_t num_rows) const;
};

// Sum of monomials in x1..xn (1-based), e.g. "3*x2*x3 - 0.5*x1^2 + 2".
class PolynomialModel : public Model {
 public:
  struct Term {
    double coef = 0.0;
    std::vector<std::pair<int, int>> powers;  // (0-based variable, exponent)
  };

  PolynomialModel(std::vector<Term> terms, int arity);
  // Throws InputError on malformed text. `arity` 0 means the largest
  // variable index that appears.
  static PolynomialModel parse(const std::string& text, int arity = 0);

  int arity() const override { return arity_; }
  std::string describe() const override;
  void predict(std::span<const double> rows, std::size_t num_rows,
               std::span<double> out) const override;
  std::optional<QuadraticForm> quadratic() const override;
  int degree() const;
  const std::vector<Term>& terms() const { return terms_; }

 private:
  std::vector<Term> terms_;
  int arity_;
};

// Indicator of an open box: product over listed variables of (lo, hi).
class RectangleModel : public Model {
 public:
  struct Side {
    int var = 0;  // 0-based
    double lo = 0.0;
    double hi = 0.0;
  };
  RectangleModel(std::vector<Side> sides, int arity);
  // "1:0.5:1.5,2:-0.5:0.5" with 1-based variables.
  static RectangleModel parse(const std::string& text, int arity = 0);

  int arity() const override { return arity_; }
  std::string describe() const override;
  void predict(std::span<const double> rows, std::size_t num_rows,
               std::span<double> out) const override;

 private:
  std::vector<Side> sides_;
  int arity_;
};

// Scores rows through an external process. The command is started once with
// /bin/sh -c; every batch is written as comma-separated lines followed by a
// blank line, and one number per row is read back.
class SubprocessModel : public Model {
 public:
  SubprocessModel(std::string command, int arity, std::size_t batch_rows = 4096);
  ~SubprocessModel() override;
  SubprocessModel(const SubprocessModel&) = delete;
  SubprocessModel& operator=(const SubprocessModel&) = delete;

  int arity() const override { return arity_; }
  std::string describe() const override { return "cmd:" + command_; }
  void predict(std::span<const double> rows, std::size_t num_rows,
               std::span<double> out) const override;

 private:
  void start();
  void stop();
  void run_batch(std::span<const double> rows, std::size_t num_rows, std::span<double> out,
                 std::size_t batch_index) const;

  std::string command_;
  int arity_;
  std::size_t batch_rows_;
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  mutable std::string pending_;
  mutable std::mutex mu_;
  mutable std::size_t batches_ = 0;
};

// "poly:<expr>" (also "bilinear:", "linear:", "analytic:"), "rect:<sides>",
// "cmd:<shell command>" (also "subprocess:").
std::unique_ptr<Model> make_model(const std::string& spec, int arity,
                                  std::size_t batch_rows = 4096);

// f_a - f_b as a model of the same arity.
std::unique_ptr<Model> difference_model(std::shared_ptr<const Model> a,
                                        std::shared_ptr<const Model> b);

}  // namespace coalex

#endif  // COALEX_MODEL_HPP_
