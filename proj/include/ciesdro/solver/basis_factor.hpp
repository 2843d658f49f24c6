// Copyright 2026 The ciesdro Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

namespace ciesdro::solver::detail {

/**
 * Sparse LU factorization of a simplex basis with product-form updates.
 *
 * Rows of the basis are constraint rows; columns are basis positions.
 * `ftran` maps a row-indexed right-hand side to a position-indexed
 * solution of B x = b, `btran` maps a position-indexed vector to the
 * row-indexed solution of B^T y = d.
 *
 * Pivots are chosen by a Markowitz search over the lowest-count columns
 * with threshold partial pivoting; singletons are taken first, which
 * keeps the largely triangular bases of scheduling models fill-free.
 */
class BasisFactor {
 public:
  struct Singular {
    int position;
    int row;
  };

  /// `column(c, rows, vals)` appends the nonzeros of basis position c.
  /// Returns the (position, row) pairs that could not be pivoted; the
  /// caller swaps in logicals for those rows and refactors.
  template <class ColumnFn>
  std::vector<Singular> factorize(int m, ColumnFn&& column);

  void ftran(std::vector<double>& x) const;
  void btran(std::vector<double>& y) const;

  /// Records the basis change at `position` with entering column
  /// `alpha = B^{-1} a_q` (position-indexed, dense).
  void update(int position, const std::vector<double>& alpha);

  int num_updates() const { return static_cast<int>(eta_pivot_pos_.size()); }
  long factor_nonzeros() const {
    return static_cast<long>(l_idx_.size() + u_idx_.size());
  }

  static constexpr double kThreshold = 0.1;
  static constexpr double kTinyPivot = 1e-11;

 private:
  struct Entry {
    int row;
    double val;
  };

  // Doubly linked count buckets for Markowitz search.
  struct Buckets {
    std::vector<int> head, next, prev, count;
    void reset(int n) {
      head.assign(n + 2, -1);
      next.assign(n, -1);
      prev.assign(n, -1);
      count.assign(n, 0);
    }
    void insert(int i, int c) {
      count[i] = c;
      prev[i] = -1;
      next[i] = head[c];
      if (head[c] >= 0) prev[head[c]] = i;
      head[c] = i;
    }
    void remove(int i) {
      int c = count[i];
      if (prev[i] >= 0) next[prev[i]] = next[i]; else head[c] = next[i];
      if (next[i] >= 0) prev[next[i]] = prev[i];
      prev[i] = next[i] = -1;
    }
    void move(int i, int c) {
      remove(i);
      insert(i, c);
    }
  };

  void eliminate(int r, int c);
  bool find_pivot(int& r, int& c);

  int m_ = 0;
  // Active submatrix during factorization.
  std::vector<std::vector<Entry>> cols_;
  std::vector<std::vector<int>> rows_;
  std::vector<char> row_active_, col_active_;
  Buckets col_bucket_, row_bucket_;
  std::vector<int> mark_;
  std::vector<double> u_row_val_;
  std::vector<int> u_row_col_;

  // Factors, stored per pivot step k in order.
  std::vector<int> pivot_row_, pivot_pos_;
  std::vector<double> pivot_val_;
  std::vector<int> l_start_, l_idx_;
  std::vector<double> l_val_;
  std::vector<int> u_start_, u_idx_;
  std::vector<double> u_val_;

  // Product-form etas.
  std::vector<int> eta_pivot_pos_, eta_start_, eta_idx_;
  std::vector<double> eta_pivot_val_, eta_val_;

  mutable std::vector<double> work_;
};

template <class ColumnFn>
std::vector<BasisFactor::Singular> BasisFactor::factorize(int m, ColumnFn&& column) {
  m_ = m;
  cols_.resize(m);
  rows_.resize(m);
  for (int i = 0; i < m; ++i) {
    cols_[i].clear();
    rows_[i].clear();
  }
  std::vector<int> idx;
  std::vector<double> val;
  for (int c = 0; c < m; ++c) {
    idx.clear();
    val.clear();
    column(c, idx, val);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      if (val[k] == 0.0) continue;
      cols_[c].push_back({idx[k], val[k]});
      rows_[idx[k]].push_back(c);
    }
  }
  row_active_.assign(m, 1);
  col_active_.assign(m, 1);
  col_bucket_.reset(m);
  row_bucket_.reset(m);
  for (int c = 0; c < m; ++c) col_bucket_.insert(c, static_cast<int>(cols_[c].size()));
  for (int r = 0; r < m; ++r) row_bucket_.insert(r, static_cast<int>(rows_[r].size()));
  mark_.assign(m, -1);

  pivot_row_.clear();
  pivot_pos_.clear();
  pivot_val_.clear();
  l_start_.assign(1, 0);
  l_idx_.clear();
  l_val_.clear();
  u_start_.assign(1, 0);
  u_idx_.clear();
  u_val_.clear();
  eta_pivot_pos_.clear();
  eta_pivot_val_.clear();
  eta_start_.assign(1, 0);
  eta_idx_.clear();
  eta_val_.clear();

  for (int k = 0; k < m; ++k) {
    int r = -1, c = -1;
    if (!find_pivot(r, c)) break;
    eliminate(r, c);
  }

  std::vector<Singular> singular;
  if (static_cast<int>(pivot_row_.size()) < m) {
    std::vector<int> free_rows, free_cols;
    for (int r = 0; r < m; ++r)
      if (row_active_[r]) free_rows.push_back(r);
    for (int c = 0; c < m; ++c)
      if (col_active_[c]) free_cols.push_back(c);
    for (std::size_t k = 0; k < free_cols.size() && k < free_rows.size(); ++k)
      singular.push_back({free_cols[k], free_rows[k]});
  }
  work_.assign(m, 0.0);
  return singular;
}

inline bool BasisFactor::find_pivot(int& r, int& c) {
  // Column singletons: no fill, no threshold needed.
  while (col_bucket_.head[1] >= 0) {
    int cc = col_bucket_.head[1];
    const Entry& e = cols_[cc].front();
    if (std::abs(e.val) > kTinyPivot) {
      r = e.row;
      c = cc;
      return true;
    }
    // Numerically zero: leave the column unpivoted.
    col_bucket_.remove(cc);
    col_active_[cc] = 0;
    cols_[cc].clear();
    row_bucket_.move(e.row, row_bucket_.count[e.row] - 1);
  }
  // Row singletons.
  for (int rr = row_bucket_.head[1]; rr >= 0; rr = row_bucket_.next[rr]) {
    int cc = -1;
    for (int j : rows_[rr])
      if (col_active_[j]) {
        cc = j;
        break;
      }
    if (cc < 0) continue;
    double colmax = 0.0, v = 0.0;
    for (const auto& e : cols_[cc]) {
      colmax = std::max(colmax, std::abs(e.val));
      if (e.row == rr) v = e.val;
    }
    if (std::abs(v) > kTinyPivot && std::abs(v) >= kThreshold * colmax) {
      r = rr;
      c = cc;
      return true;
    }
  }
  // Markowitz search over the lowest-count columns.
  long best_cost = -1;
  double best_abs = 0.0;
  int searched = 0;
  for (int cnt = 2; cnt <= m_; ++cnt) {
    for (int cc = col_bucket_.head[cnt]; cc >= 0; cc = col_bucket_.next[cc]) {
      double colmax = 0.0;
      for (const auto& e : cols_[cc]) colmax = std::max(colmax, std::abs(e.val));
      if (colmax <= kTinyPivot) continue;
      bool found = false;
      for (const auto& e : cols_[cc]) {
        double a = std::abs(e.val);
        if (a < kThreshold * colmax || a <= kTinyPivot) continue;
        long cost = static_cast<long>(row_bucket_.count[e.row] - 1) * (cnt - 1);
        if (best_cost < 0 || cost < best_cost || (cost == best_cost && a > best_abs)) {
          best_cost = cost;
          best_abs = a;
          r = e.row;
          c = cc;
        }
        found = true;
      }
      if (found) ++searched;
      if (best_cost >= 0 && (searched >= 4 || best_cost <= static_cast<long>(cnt - 1) * (cnt - 1)))
        return true;
    }
    if (best_cost >= 0 && searched > 0) return true;
  }
  return best_cost >= 0;
}

inline void BasisFactor::eliminate(int r, int c) {
  // Pivot value and L multipliers from column c.
  double piv = 0.0;
  for (const auto& e : cols_[c])
    if (e.row == r) piv = e.val;
  pivot_row_.push_back(r);
  pivot_pos_.push_back(c);
  pivot_val_.push_back(piv);

  const std::size_t l_begin = l_idx_.size();
  for (const auto& e : cols_[c]) {
    if (e.row == r) continue;
    l_idx_.push_back(e.row);
    l_val_.push_back(e.val / piv);
    // Column c leaves row e.row.
    row_bucket_.move(e.row, row_bucket_.count[e.row] - 1);
  }
  l_start_.push_back(static_cast<int>(l_idx_.size()));

  col_bucket_.remove(c);
  col_active_[c] = 0;
  cols_[c].clear();
  row_bucket_.remove(r);
  row_active_[r] = 0;

  // Pivot row: move entries to U and drop them from their columns.
  u_row_col_.clear();
  u_row_val_.clear();
  for (int j : rows_[r]) {
    if (!col_active_[j]) continue;
    auto& col = cols_[j];
    for (std::size_t k = 0; k < col.size(); ++k) {
      if (col[k].row == r) {
        u_row_col_.push_back(j);
        u_row_val_.push_back(col[k].val);
        col[k] = col.back();
        col.pop_back();
        break;
      }
    }
  }
  // Rows may list a column twice after fill; keep the first occurrence.
  for (std::size_t k = 0; k < u_row_col_.size(); ++k) {
    u_idx_.push_back(u_row_col_[k]);
    u_val_.push_back(u_row_val_[k]);
  }
  u_start_.push_back(static_cast<int>(u_idx_.size()));

  // Schur complement update.
  const std::size_t l_end = l_idx_.size();
  for (std::size_t k = 0; k < u_row_col_.size(); ++k) {
    int j = u_row_col_[k];
    double arj = u_row_val_[k];
    auto& col = cols_[j];
    for (std::size_t q = 0; q < col.size(); ++q) mark_[col[q].row] = static_cast<int>(q);
    for (std::size_t q = l_begin; q < l_end; ++q) {
      int i = l_idx_[q];
      double delta = -l_val_[q] * arj;
      if (mark_[i] >= 0) {
        col[mark_[i]].val += delta;
      } else {
        mark_[i] = static_cast<int>(col.size());
        col.push_back({i, delta});
        rows_[i].push_back(j);
        row_bucket_.move(i, row_bucket_.count[i] + 1);
      }
    }
    for (const auto& e : col) mark_[e.row] = -1;
    col_bucket_.move(j, static_cast<int>(col.size()));
  }
}

inline void BasisFactor::ftran(std::vector<double>& x) const {
  // x enters row-indexed, leaves position-indexed.
  const int steps = static_cast<int>(pivot_row_.size());
  for (int k = 0; k < steps; ++k) {
    double t = x[pivot_row_[k]];
    if (t == 0.0) continue;
    for (int q = l_start_[k]; q < l_start_[k + 1]; ++q) x[l_idx_[q]] -= l_val_[q] * t;
  }
  std::vector<double>& out = work_;
  for (int k = steps - 1; k >= 0; --k) {
    double s = x[pivot_row_[k]];
    for (int q = u_start_[k]; q < u_start_[k + 1]; ++q) s -= u_val_[q] * out[u_idx_[q]];
    out[pivot_pos_[k]] = s / pivot_val_[k];
  }
  x.swap(out);
  // Etas in order.
  const int etas = static_cast<int>(eta_pivot_pos_.size());
  for (int e = 0; e < etas; ++e) {
    int p = eta_pivot_pos_[e];
    double xp = x[p] / eta_pivot_val_[e];
    x[p] = xp;
    if (xp == 0.0) continue;
    for (int q = eta_start_[e]; q < eta_start_[e + 1]; ++q) x[eta_idx_[q]] -= eta_val_[q] * xp;
  }
}

inline void BasisFactor::btran(std::vector<double>& y) const {
  // y enters position-indexed, leaves row-indexed.
  const int etas = static_cast<int>(eta_pivot_pos_.size());
  for (int e = etas - 1; e >= 0; --e) {
    int p = eta_pivot_pos_[e];
    double s = y[p];
    for (int q = eta_start_[e]; q < eta_start_[e + 1]; ++q) s -= eta_val_[q] * y[eta_idx_[q]];
    y[p] = s / eta_pivot_val_[e];
  }
  const int steps = static_cast<int>(pivot_row_.size());
  std::vector<double>& z = work_;
  for (int k = 0; k < steps; ++k) {
    double zk = y[pivot_pos_[k]] / pivot_val_[k];
    z[pivot_row_[k]] = zk;
    if (zk == 0.0) continue;
    for (int q = u_start_[k]; q < u_start_[k + 1]; ++q) y[u_idx_[q]] -= u_val_[q] * zk;
  }
  for (int k = steps - 1; k >= 0; --k) {
    double s = 0.0;
    for (int q = l_start_[k]; q < l_start_[k + 1]; ++q) s += l_val_[q] * z[l_idx_[q]];
    z[pivot_row_[k]] -= s;
  }
  y.swap(z);
}

inline void BasisFactor::update(int position, const std::vector<double>& alpha) {
  eta_pivot_pos_.push_back(position);
  eta_pivot_val_.push_back(alpha[position]);
  for (int i = 0; i < m_; ++i) {
    if (i == position || alpha[i] == 0.0) continue;
    eta_idx_.push_back(i);
    eta_val_.push_back(alpha[i]);
  }
  eta_start_.push_back(static_cast<int>(eta_idx_.size()));
}

}  // namespace ciesdro::solver::detail
