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

#include "coalex/mic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include "coalex/dataset.hpp"
#include "coalex/error.hpp"

namespace coalex {

int mic_grid_bound(std::size_t n, const MicConfig& cfg) {
  if (!(cfg.b_exponent > 0.0 && cfg.b_exponent < 1.0)) {
    throw_invalid("b_exponent must lie in (0,1)");
  }
  // The small slack keeps exact powers such as 32^0.6 = 8 from rounding up.
  const double b = std::pow(static_cast<double>(n), cfg.b_exponent);
  return std::max(4, static_cast<int>(std::ceil(b - 1e-9)));
}

double discrete_mutual_information(const CountTable& counts) {
  if (counts.empty() || counts[0].empty()) throw_invalid("empty count table");
  const std::size_t cols = counts[0].size();
  std::vector<double> row_sum(counts.size(), 0.0), col_sum(cols, 0.0);
  double total = 0.0;
  for (std::size_t a = 0; a < counts.size(); ++a) {
    if (counts[a].size() != cols) throw_invalid("count table is ragged");
    for (std::size_t b = 0; b < cols; ++b) {
      const double c = counts[a][b];
      if (!(c >= 0.0)) throw_invalid("counts must be nonnegative");
      row_sum[a] += c;
      col_sum[b] += c;
      total += c;
    }
  }
  if (!(total > 0.0)) throw_invalid("count table has zero total");
  double mi = 0.0;
  for (std::size_t a = 0; a < counts.size(); ++a) {
    for (std::size_t b = 0; b < cols; ++b) {
      const double c = counts[a][b];
      if (c > 0.0) mi += c / total * std::log(c * total / (row_sum[a] * col_sum[b]));
    }
  }
  return std::max(0.0, mi / std::log(2.0));
}

namespace {

std::vector<int> sorted_order(std::span<const double> v) {
  std::vector<int> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return v[a] < v[b]; });
  return order;
}

void equipartition_sorted(std::span<const double> v, const std::vector<int>& order,
                          int bins, std::vector<int>& out) {
  const std::size_t n = order.size();
  out.resize(n);
  std::size_t r = 0;
  while (r < n) {
    std::size_t e = r + 1;
    while (e < n && v[order[e]] == v[order[r]]) ++e;
    const int b = static_cast<int>((r * static_cast<std::size_t>(bins)) / n);
    for (std::size_t q = r; q < e; ++q) out[order[q]] = b;
    r = e;
  }
}

double xlogx(double c) { return c > 0.0 ? c * std::log(c) : 0.0; }

// Column optimizer for one (equipartitioned rows, sorted column axis) pair.
class AxisOptimizer {
 public:
  AxisOptimizer(std::span<const double> x, const std::vector<int>& x_order,
                const MicConfig& cfg)
      : x_(x), order_(x_order), cfg_(cfg) {}

  // best[k] = max mutual information (nats) with at most k columns, for
  // k = 0..kmax (entries 0 and 1 are zero).
  std::vector<double> optimize(const std::vector<int>& rows, int nrows, int kmax) {
    const std::size_t n = order_.size();
    std::vector<double> best(kmax + 1, 0.0);

    // Clumps: maximal x-ordered runs of a single row, never splitting ties.
    ends_.clear();
    int clump_row = -2;  // -1 marks a mixed clump
    std::size_t r = 0;
    while (r < n) {
      std::size_t e = r + 1;
      while (e < n && x_[order_[e]] == x_[order_[r]]) ++e;
      int unit_row = rows[order_[r]];
      for (std::size_t q = r + 1; q < e; ++q) {
        if (rows[order_[q]] != unit_row) {
          unit_row = -1;
          break;
        }
      }
      if (!ends_.empty() && unit_row >= 0 && unit_row == clump_row) {
        ends_.back() = e;
      } else {
        ends_.push_back(e);
        clump_row = unit_row;
      }
      r = e;
    }

    // Superclumps: merge clumps into about `cap` groups of equal mass.
    const std::size_t cap = static_cast<std::size_t>(
        std::max(cfg_.exact_clump_limit, cfg_.max_clumps_factor * kmax));
    if (ends_.size() > cap) {
      std::vector<std::size_t> merged;
      std::size_t start = 0;
      long last_group = -1;
      for (std::size_t e : ends_) {
        const long group = static_cast<long>((start * cap) / n);
        if (group == last_group) {
          merged.back() = e;
        } else {
          merged.push_back(e);
          last_group = group;
        }
        start = e;
      }
      ends_ = std::move(merged);
    }

    const std::size_t c = ends_.size();
    // Prefix counts per row over clumps.
    prefix_.assign((c + 1) * nrows, 0.0);
    totals_.assign(c + 1, 0.0);
    std::size_t pos = 0;
    for (std::size_t k = 0; k < c; ++k) {
      double* dst = &prefix_[(k + 1) * nrows];
      std::copy(&prefix_[k * nrows], &prefix_[k * nrows] + nrows, dst);
      for (; pos < ends_[k]; ++pos) dst[rows[order_[pos]]] += 1.0;
      totals_[k + 1] = static_cast<double>(ends_[k]);
    }

    // cost(s,t) = cnt log cnt - sum_r n_r log n_r over clumps s..t-1.
    cost_.assign((c + 1) * (c + 1), 0.0);
    for (std::size_t s = 0; s < c; ++s) {
      for (std::size_t t = s + 1; t <= c; ++t) {
        const double cnt = totals_[t] - totals_[s];
        double h = xlogx(cnt);
        const double* hi = &prefix_[t * nrows];
        const double* lo = &prefix_[s * nrows];
        for (int q = 0; q < nrows; ++q) h -= xlogx(hi[q] - lo[q]);
        cost_[s * (c + 1) + t] = h;
      }
    }

    double hq = 0.0;
    {
      const double* all = &prefix_[c * nrows];
      for (int q = 0; q < nrows; ++q) hq -= xlogx(all[q] / n);
    }
    const double nd = static_cast<double>(n);

    // dp[t] = min cost of splitting clumps 0..t-1 into exactly k columns.
    std::vector<double> dp(c + 1), next(c + 1);
    const double inf = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t <= c; ++t) dp[t] = t == 0 ? inf : cost_[t];
    double running = hq - dp[c] / nd;
    for (int k = 2; k <= kmax; ++k) {
      std::fill(next.begin(), next.end(), inf);
      for (std::size_t t = k; t <= c; ++t) {
        double m = inf;
        for (std::size_t s = k - 1; s < t; ++s) {
          const double val = dp[s] + cost_[s * (c + 1) + t];
          if (val < m) m = val;
        }
        next[t] = m;
      }
      dp.swap(next);
      if (std::isfinite(dp[c])) running = std::max(running, hq - dp[c] / nd);
      best[k] = std::max(0.0, running);
    }
    return best;
  }

 private:
  std::span<const double> x_;
  const std::vector<int>& order_;
  const MicConfig& cfg_;
  std::vector<std::size_t> ends_;
  std::vector<double> prefix_, totals_, cost_;
};

// Equipartition `rows_axis` into l bins and optimize `cols_axis` into at most
// l columns; scores are normalized by log(columns).
double one_orientation(std::span<const double> cols_axis, std::span<const double> rows_axis,
                       const MicConfig& cfg, int bound) {
  const auto col_order = sorted_order(cols_axis);
  const auto row_order = sorted_order(rows_axis);
  AxisOptimizer opt(cols_axis, col_order, cfg);
  std::vector<int> rows;
  double best = 0.0;
  for (int l = 2;; ++l) {
    if (cfg.max_grid_dim > 0 && l > cfg.max_grid_dim) break;
    int kmax = std::min(l, (bound - 1) / l);
    if (cfg.max_grid_dim > 0) kmax = std::min(kmax, cfg.max_grid_dim);
    if (kmax < 2) break;
    equipartition_sorted(rows_axis, row_order, l, rows);
    const auto mi = opt.optimize(rows, l, kmax);
    for (int k = 2; k <= kmax; ++k) best = std::max(best, mi[k] / std::log(k));
  }
  return best;
}

}  // namespace

std::vector<int> equipartition(std::span<const double> values, int bins) {
  if (bins < 1) throw_invalid("bins must be positive");
  std::vector<int> out;
  equipartition_sorted(values, sorted_order(values), bins, out);
  return out;
}

double mic_e(std::span<const double> x, std::span<const double> y, const MicConfig& cfg) {
  if (x.size() != y.size()) throw_invalid("mic_e inputs differ in length");
  if (x.size() < 8) throw_invalid("mic_e needs at least 8 samples");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw_invalid("mic_e inputs must be finite");
  }
  if (cfg.max_clumps_factor < 1) throw_invalid("max_clumps_factor must be >= 1");
  const int bound = mic_grid_bound(x.size(), cfg);
  const double a = one_orientation(x, y, cfg, bound);
  const double b = one_orientation(y, x, cfg, bound);
  return std::clamp(std::max(a, b), 0.0, 1.0);
}

DissimilarityMatrix::DissimilarityMatrix(int n, std::vector<double> values) : n_(n) {
  if (n < 0) throw_invalid("negative matrix size");
  if (values.empty()) values.assign(static_cast<std::size_t>(n) * n, 0.0);
  if (values.size() != static_cast<std::size_t>(n) * n) throw_invalid("matrix must be n x n");
  d_ = std::move(values);
  for (int i = 0; i < n; ++i) {
    if (d_[i * n + i] != 0.0) throw_invalid("dissimilarity diagonal must be 0");
    for (int j = 0; j < n; ++j) {
      const double v = d_[i * n + j];
      if (!(v >= 0.0 && v <= 1.0)) throw_invalid("dissimilarities must lie in [0,1]");
      if (v != d_[j * n + i]) throw_invalid("dissimilarity matrix must be symmetric");
    }
  }
}

void DissimilarityMatrix::set(int i, int j, double value) {
  if (i == j && value != 0.0) throw_invalid("diagonal must stay 0");
  if (!(value >= 0.0 && value <= 1.0)) throw_invalid("dissimilarities must lie in [0,1]");
  d_[i * n_ + j] = value;
  d_[j * n_ + i] = value;
}

DissimilarityMatrix dissimilarity_matrix(const Dataset& data, const MicConfig& cfg,
                                         int workers) {
  if (data.rows() < 8) throw_invalid("dissimilarity needs at least 8 samples");
  const int n = static_cast<int>(data.cols());
  std::vector<std::vector<double>> cols(n);
  for (int c = 0; c < n; ++c) cols[c] = data.column(c);
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  std::vector<double> result(pairs.size());
  auto work = [&](std::size_t begin, std::size_t step) {
    for (std::size_t k = begin; k < pairs.size(); k += step) {
      result[k] = 1.0 - mic_e(cols[pairs[k].first], cols[pairs[k].second], cfg);
    }
  };
  workers = std::max(1, workers);
  if (workers == 1 || pairs.size() < 2) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
    for (auto& t : pool) t.join();
  }
  DissimilarityMatrix d(n);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    d.set(pairs[k].first, pairs[k].second, result[k]);
  }
  d.labels = data.names();
  return d;
}

void write_dissimilarity_csv(const DissimilarityMatrix& d, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  for (int j = 0; j < d.size(); ++j) {
    if (j) out << ',';
    out << (j < static_cast<int>(d.labels.size()) ? d.labels[j] : "x" + std::to_string(j));
  }
  out << '\n';
  for (int i = 0; i < d.size(); ++i) {
    for (int j = 0; j < d.size(); ++j) {
      if (j) out << ',';
      out << format_double(d(i, j));
    }
    out << '\n';
  }
}

DissimilarityMatrix read_dissimilarity_csv(const std::string& path) {
  const Dataset raw = read_csv(path);
  if (raw.rows() != raw.cols()) throw InputError(path + ": matrix is not square");
  try {
    DissimilarityMatrix d(static_cast<int>(raw.rows()), raw.values());
    d.labels = raw.names();
    return d;
  } catch (const InvalidArgument& e) {
    throw InputError(path + ": " + e.what());
  }
}

}  // namespace coalex
