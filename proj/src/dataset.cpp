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

#include "coalex/dataset.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>

#include "coalex/error.hpp"

namespace coalex {

Dataset::Dataset(std::size_t rows, std::size_t cols, std::vector<double> values,
                 std::vector<std::string> names)
    : rows_(rows), cols_(cols), values_(std::move(values)), names_(std::move(names)) {
  if (values_.size() != rows_ * cols_) throw_invalid("dataset is not rectangular");
  for (double x : values_) {
    if (!std::isfinite(x)) throw_invalid("dataset entries must be finite");
  }
  if (names_.empty()) {
    for (std::size_t c = 0; c < cols_; ++c) names_.push_back("x" + std::to_string(c + 1));
  }
  if (names_.size() != cols_) throw_invalid("one name per column required");
}

std::vector<double> Dataset::column(std::size_t c) const {
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

void Dataset::set_weights(std::vector<double> weights) {
  if (weights.size() != rows_) throw_invalid("one weight per row required");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw_invalid("weights must be nonnegative");
    total += w;
  }
  if (!(total > 0.0)) throw_invalid("weights must have positive sum");
  for (double& w : weights) w /= total;
  weights_ = std::move(weights);
}

Dataset Dataset::select_columns(const std::vector<int>& cols) const {
  std::vector<double> vals;
  vals.reserve(rows_ * cols.size());
  std::vector<std::string> names;
  for (int c : cols) {
    if (c < 0 || static_cast<std::size_t>(c) >= cols_) throw_invalid("column out of range");
    names.push_back(names_[c]);
  }
  for (std::size_t r = 0; r < rows_; ++r) {
    for (int c : cols) vals.push_back((*this)(r, c));
  }
  Dataset out(rows_, cols.size(), std::move(vals), std::move(names));
  out.weights_ = weights_;
  return out;
}

Dataset Dataset::head(std::size_t n) const {
  n = std::min(n, rows_);
  Dataset out(n, cols_, std::vector<double>(values_.begin(), values_.begin() + n * cols_),
              names_);
  if (!weights_.empty()) {
    out.set_weights(std::vector<double>(weights_.begin(), weights_.begin() + n));
  }
  return out;
}

namespace {

struct Fnv {
  std::uint64_t h = 1469598103934665603ull;
  void bytes(const void* p, std::size_t n) {
    const auto* c = static_cast<const unsigned char*>(p);
    for (std::size_t k = 0; k < n; ++k) {
      h ^= c[k];
      h *= 1099511628211ull;
    }
  }
  void u64(std::uint64_t x) { bytes(&x, sizeof x); }
};

}  // namespace

std::string Dataset::content_hash() const {
  Fnv f;
  f.u64(rows_);
  f.u64(cols_);
  for (const auto& n : names_) {
    f.u64(n.size());
    f.bytes(n.data(), n.size());
  }
  for (double x : values_) f.bytes(&x, sizeof x);
  f.u64(weights_.size());
  for (double x : weights_) f.bytes(&x, sizeof x);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(f.h));
  return buf;
}

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double x = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), x);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || text.empty()) {
    throw InputError("not a number: '" + std::string(text) + "'");
  }
  return x;
}

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

Dataset read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw InputError(path + ": empty file");
  if (line.size() >= 3 && std::memcmp(line.data(), "\xEF\xBB\xBF", 3) == 0) line.erase(0, 3);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> names;
  for (auto f : split_commas(line)) names.emplace_back(f);
  const std::size_t cols = names.size();
  std::vector<double> values;
  std::size_t rows = 0;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_commas(line);
    if (fields.size() != cols) {
      throw InputError(path + ":" + std::to_string(lineno) + ": expected " +
                       std::to_string(cols) + " fields, got " +
                       std::to_string(fields.size()));
    }
    for (auto f : fields) {
      try {
        const double x = parse_double(f);
        if (!std::isfinite(x)) throw InputError("non-finite value");
        values.push_back(x);
      } catch (const InputError& e) {
        throw InputError(path + ":" + std::to_string(lineno) + ": " + e.what());
      }
    }
    ++rows;
  }
  return Dataset(rows, cols, std::move(values), std::move(names));
}

void write_csv(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  for (std::size_t c = 0; c < data.cols(); ++c) {
    if (c) out << ',';
    out << data.names()[c];
  }
  out << '\n';
  for (std::size_t r = 0; r < data.rows(); ++r) {
    for (std::size_t c = 0; c < data.cols(); ++c) {
      if (c) out << ',';
      out << format_double(data(r, c));
    }
    out << '\n';
  }
  if (!out) throw InputError("write failed for '" + path + "'");
}

}  // namespace coalex
