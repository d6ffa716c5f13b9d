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

#ifndef COALEX_DATASET_HPP_
#define COALEX_DATASET_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace coalex {

// Row-major matrix of finite reals with column names and optional
// nonnegative row weights (uniform when absent).
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::size_t rows, std::size_t cols, std::vector<double> values,
          std::vector<std::string> names = {});

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }
  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * cols_, cols_};
  }
  std::vector<double> column(std::size_t c) const;
  const std::vector<double>& values() const { return values_; }
  const std::vector<std::string>& names() const { return names_; }

  bool weighted() const { return !weights_.empty(); }
  // Normalized weight of row r (1/rows when unweighted).
  double weight(std::size_t r) const {
    return weights_.empty() ? 1.0 / static_cast<double>(rows_) : weights_[r];
  }
  // Stores the weights normalized to sum 1.
  void set_weights(std::vector<double> weights);

  Dataset select_columns(const std::vector<int>& cols) const;
  Dataset head(std::size_t n) const;

  // FNV-1a digest of shape, names, values and weights, as 16 hex digits.
  std::string content_hash() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
  std::vector<std::string> names_;
  std::vector<double> weights_;
};

// Comma-separated, header row first. Errors name the file and line.
Dataset read_csv(const std::string& path);
void write_csv(const Dataset& data, const std::string& path);

// Shortest decimal text that parses back to the same double.
std::string format_double(double x);
// Locale-independent parse of a whole field; throws InputError.
double parse_double(std::string_view text);

}  // namespace coalex

#endif  // COALEX_DATASET_HPP_
