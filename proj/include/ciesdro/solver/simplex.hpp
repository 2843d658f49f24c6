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
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ciesdro/solver/basis_factor.hpp"
#include "ciesdro/solver/problem.hpp"

namespace ciesdro::solver {

/// Numerical breakdown that survived a refactorization retry.
class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(const std::string& backend, const std::string& what)
      : std::runtime_error("[" + backend + "] " + what), backend_(backend) {}
  const std::string& backend() const { return backend_; }

 private:
  std::string backend_;
};

struct SimplexOptions {
  double primal_tol = 1e-9;
  double dual_tol = 1e-9;
  double pivot_tol = 1e-9;
  int refactor_interval = 50;
  long max_iterations = 2'000'000;
  /// Consecutive degenerate pivots before switching to Bland's rule.
  int bland_after = 1000;
};

/**
 * Bounded revised simplex over `A x - s = 0`, with one logical `s_i` per
 * row carrying the row bounds. Structural columns come first, logicals
 * follow at index `n + i`.
 *
 * A cold solve starts from the all-logical basis. When the starting basis
 * is dual feasible the dual simplex runs (the branch-and-bound case after
 * a bound change); otherwise the primal simplex runs with a composite
 * phase 1 that minimizes the sum of infeasibilities.
 */
class SimplexEngine {
 public:
  explicit SimplexEngine(const SparseProblem& p, SimplexOptions opt = {})
      : opt_(opt) {
    p.validate();
    n_ = p.n_vars();
    m_ = p.n_rows();
    offset_ = p.objective_offset;
    // Compressed columns (duplicates summed).
    std::vector<int> count(n_, 0);
    for (const auto& t : p.entries) ++count[t.col];
    col_start_.assign(n_ + 1, 0);
    for (int j = 0; j < n_; ++j) col_start_[j + 1] = col_start_[j] + count[j];
    col_row_.resize(p.entries.size());
    col_val_.resize(p.entries.size());
    std::vector<int> fill(col_start_.begin(), col_start_.end() - 1);
    for (const auto& t : p.entries) {
      col_row_[fill[t.col]] = t.row;
      col_val_[fill[t.col]] = t.value;
      ++fill[t.col];
    }
    merge_duplicates();
    // Row-wise copy for pivot row computation.
    std::vector<int> rcount(m_, 0);
    for (int q = 0; q < col_start_[n_]; ++q) ++rcount[col_row_[q]];
    row_start_.assign(m_ + 1, 0);
    for (int i = 0; i < m_; ++i) row_start_[i + 1] = row_start_[i] + rcount[i];
    row_col_.resize(col_start_[n_]);
    row_val_.resize(col_start_[n_]);
    std::vector<int> rfill(row_start_.begin(), row_start_.end() - 1);
    for (int j = 0; j < n_; ++j)
      for (int q = col_start_[j]; q < col_start_[j + 1]; ++q) {
        int i = col_row_[q];
        row_col_[rfill[i]] = j;
        row_val_[rfill[i]] = col_val_[q];
        ++rfill[i];
      }

    const int total = n_ + m_;
    cost_.assign(total, 0.0);
    lo_.assign(total, 0.0);
    up_.assign(total, 0.0);
    for (int j = 0; j < n_; ++j) {
      cost_[j] = p.cost[j];
      lo_[j] = p.lower[j];
      up_[j] = p.upper[j];
    }
    for (int i = 0; i < m_; ++i) {
      double b = p.rhs[i];
      switch (p.sense[i]) {
        case RowSense::LessEqual: lo_[n_ + i] = -kInf; up_[n_ + i] = b; break;
        case RowSense::GreaterEqual: lo_[n_ + i] = b; up_[n_ + i] = kInf; break;
        case RowSense::Equal: lo_[n_ + i] = b; up_[n_ + i] = b; break;
      }
    }
    x_.assign(total, 0.0);
    d_.assign(total, 0.0);
    reset_basis();
  }

  int num_structural() const { return n_; }
  int num_rows() const { return m_; }

  void set_bounds(int j, double lo, double up) {
    lo_[j] = lo;
    up_[j] = up;
  }
  double lower(int j) const { return lo_[j]; }
  double upper(int j) const { return up_[j]; }

  /// All-logical starting basis.
  void reset_basis() {
    const int total = n_ + m_;
    status_.assign(total, VarStatus::AtLower);
    head_.assign(m_, -1);
    pos_.assign(total, -1);
    for (int i = 0; i < m_; ++i) {
      status_[n_ + i] = VarStatus::Basic;
      head_[i] = n_ + i;
      pos_[n_ + i] = i;
    }
    for (int j = 0; j < n_; ++j) status_[j] = default_status(j);
    factor_valid_ = false;
  }

  const std::vector<VarStatus>& basis() const { return status_; }

  void set_basis(const std::vector<VarStatus>& st) {
    if (static_cast<int>(st.size()) != n_ + m_) {
      reset_basis();
      return;
    }
    int basics = static_cast<int>(std::count(st.begin(), st.end(), VarStatus::Basic));
    if (basics != m_) {
      reset_basis();
      return;
    }
    status_ = st;
    head_.clear();
    pos_.assign(n_ + m_, -1);
    for (int j = 0; j < n_ + m_; ++j)
      if (status_[j] == VarStatus::Basic) {
        pos_[j] = static_cast<int>(head_.size());
        head_.push_back(j);
      }
    factor_valid_ = false;
  }

  SolveStatus solve() {
    iterations_ = 0;
    for (int j = 0; j < n_ + m_; ++j)
      if (lo_[j] > up_[j] + opt_.primal_tol) return SolveStatus::Infeasible;
    place_nonbasics();
    refactor();
    compute_primal();
    compute_duals(cost_);
    if (dual_feasible_after_flips()) {
      DualOutcome s = dual_simplex();
      if (s == DualOutcome::Optimal) {
        compute_duals(cost_);
        if (dual_violation() <= 10 * opt_.dual_tol) return SolveStatus::Optimal;
      } else if (s == DualOutcome::IterationLimit) {
        return SolveStatus::IterationLimit;
      }
      // Infeasible or round-off trouble: the primal confirms or cleans up.
    }
    return primal_simplex();
  }

  double objective() const {
    double z = offset_;
    for (int j = 0; j < n_; ++j) z += cost_[j] * x_[j];
    return z;
  }

  std::vector<double> values() const { return {x_.begin(), x_.begin() + n_}; }

  /// Row duals: the sensitivity of the objective to each row's rhs.
  std::vector<double> row_duals() const { return y_; }

  std::vector<double> reduced_costs() const { return {d_.begin(), d_.begin() + n_}; }

  long iterations() const { return iterations_; }

 private:
  VarStatus default_status(int j) const {
    if (std::isfinite(lo_[j])) return VarStatus::AtLower;
    if (std::isfinite(up_[j])) return VarStatus::AtUpper;
    return VarStatus::AtZero;
  }

  void merge_duplicates() {
    std::vector<int> start(n_ + 1, 0);
    std::vector<int> rows;
    std::vector<double> vals;
    std::vector<int> seen(0);
    int maxrow = 0;
    for (int r : col_row_) maxrow = std::max(maxrow, r + 1);
    seen.assign(maxrow, -1);
    for (int j = 0; j < n_; ++j) {
      int begin = static_cast<int>(rows.size());
      for (int q = col_start_[j]; q < col_start_[j + 1]; ++q) {
        int r = col_row_[q];
        if (seen[r] >= begin) {
          vals[seen[r]] += col_val_[q];
        } else {
          seen[r] = static_cast<int>(rows.size());
          rows.push_back(r);
          vals.push_back(col_val_[q]);
        }
      }
      start[j + 1] = static_cast<int>(rows.size());
    }
    col_start_ = std::move(start);
    col_row_ = std::move(rows);
    col_val_ = std::move(vals);
  }

  // --- linear algebra helpers ---------------------------------------------

  void load_column(int j, std::vector<double>& dense) const {
    dense.assign(m_, 0.0);
    if (j < n_) {
      for (int q = col_start_[j]; q < col_start_[j + 1]; ++q) dense[col_row_[q]] = col_val_[q];
    } else {
      dense[j - n_] = -1.0;
    }
  }

  double column_dot(int j, const std::vector<double>& y) const {
    if (j >= n_) return -y[j - n_];
    double s = 0.0;
    for (int q = col_start_[j]; q < col_start_[j + 1]; ++q) s += col_val_[q] * y[col_row_[q]];
    return s;
  }

  void refactor() {
    for (int attempt = 0; attempt < 3; ++attempt) {
      auto singular = lu_.factorize(m_, [&](int c, std::vector<int>& idx, std::vector<double>& val) {
        int j = head_[c];
        if (j < n_) {
          for (int q = col_start_[j]; q < col_start_[j + 1]; ++q) {
            idx.push_back(col_row_[q]);
            val.push_back(col_val_[q]);
          }
        } else {
          idx.push_back(j - n_);
          val.push_back(-1.0);
        }
      });
      if (singular.empty()) {
        factor_valid_ = true;
        return;
      }
      // Replace dependent columns with logicals of uncovered rows.
      for (const auto& s : singular) {
        int out = head_[s.position];
        int in = n_ + s.row;
        if (status_[in] == VarStatus::Basic) continue;
        status_[out] = default_status(out);
        place_one(out);
        pos_[out] = -1;
        head_[s.position] = in;
        pos_[in] = s.position;
        status_[in] = VarStatus::Basic;
      }
    }
    throw SolverFailure("builtin", "basis remains singular after repair");
  }

  void place_one(int j) {
    switch (status_[j]) {
      case VarStatus::AtLower: x_[j] = lo_[j]; break;
      case VarStatus::AtUpper: x_[j] = up_[j]; break;
      case VarStatus::AtZero: x_[j] = 0.0; break;
      case VarStatus::Basic: break;
    }
  }

  /// Puts every nonbasic at a finite bound consistent with its status.
  void place_nonbasics() {
    for (int j = 0; j < n_ + m_; ++j) {
      if (status_[j] == VarStatus::Basic) continue;
      if (status_[j] == VarStatus::AtLower && !std::isfinite(lo_[j])) status_[j] = default_status(j);
      if (status_[j] == VarStatus::AtUpper && !std::isfinite(up_[j])) status_[j] = default_status(j);
      if (status_[j] == VarStatus::AtZero && (std::isfinite(lo_[j]) || std::isfinite(up_[j])))
        status_[j] = default_status(j);
      place_one(j);
    }
  }

  void compute_primal() {
    std::vector<double>& r = buf_a_;
    r.assign(m_, 0.0);
    for (int j = 0; j < n_; ++j) {
      if (status_[j] == VarStatus::Basic || x_[j] == 0.0) continue;
      for (int q = col_start_[j]; q < col_start_[j + 1]; ++q) r[col_row_[q]] -= col_val_[q] * x_[j];
    }
    for (int i = 0; i < m_; ++i) {
      int j = n_ + i;
      if (status_[j] != VarStatus::Basic) r[i] += x_[j];
    }
    lu_.ftran(r);
    for (int p = 0; p < m_; ++p) x_[head_[p]] = r[p];
  }

  void compute_duals(const std::vector<double>& c) {
    y_.assign(m_, 0.0);
    for (int p = 0; p < m_; ++p) y_[p] = c[head_[p]];
    lu_.btran(y_);
    for (int j = 0; j < n_ + m_; ++j)
      d_[j] = status_[j] == VarStatus::Basic ? 0.0 : c[j] - column_dot(j, y_);
  }

  double infeasibility(int j) const {
    if (x_[j] < lo_[j] - opt_.primal_tol) return lo_[j] - x_[j];
    if (x_[j] > up_[j] + opt_.primal_tol) return x_[j] - up_[j];
    return 0.0;
  }

  bool boxed(int j) const { return std::isfinite(lo_[j]) && std::isfinite(up_[j]); }

  double dual_violation() const {
    double worst = 0.0;
    for (int j = 0; j < n_ + m_; ++j) {
      if (status_[j] == VarStatus::Basic || lo_[j] == up_[j]) continue;
      double dj = d_[j];
      if (status_[j] == VarStatus::AtLower) worst = std::max(worst, -dj);
      else if (status_[j] == VarStatus::AtUpper) worst = std::max(worst, dj);
      else worst = std::max(worst, std::abs(dj));
    }
    return worst;
  }

  /// Flips boxed nonbasics to the bound their reduced cost prefers.
  /// Returns false when some non-boxed nonbasic is dual infeasible.
  bool dual_feasible_after_flips() {
    bool flipped = false;
    for (int j = 0; j < n_ + m_; ++j) {
      if (status_[j] == VarStatus::Basic || lo_[j] == up_[j]) continue;
      double dj = d_[j];
      if (status_[j] == VarStatus::AtLower && dj < -opt_.dual_tol) {
        if (!std::isfinite(up_[j])) return false;
        status_[j] = VarStatus::AtUpper;
        flipped = true;
      } else if (status_[j] == VarStatus::AtUpper && dj > opt_.dual_tol) {
        if (!std::isfinite(lo_[j])) return false;
        status_[j] = VarStatus::AtLower;
        flipped = true;
      } else if (status_[j] == VarStatus::AtZero && std::abs(dj) > opt_.dual_tol) {
        return false;
      }
      place_one(j);
    }
    if (flipped) compute_primal();
    return true;
  }

  void pivot_in(int q, int p_pos, const std::vector<double>& alpha, VarStatus leaving_status) {
    int leaving = head_[p_pos];
    status_[leaving] = leaving_status;
    place_one(leaving);
    pos_[leaving] = -1;
    head_[p_pos] = q;
    pos_[q] = p_pos;
    status_[q] = VarStatus::Basic;
    lu_.update(p_pos, alpha);
    if (lu_.num_updates() >= opt_.refactor_interval) {
      refactor();
      compute_primal();
    }
  }

  // --- primal simplex -------------------------------------------------------

  SolveStatus primal_simplex() {
    std::vector<double>& alpha = buf_b_;
    std::vector<double> phase_cost(n_ + m_, 0.0);
    int degenerate = 0;
    int breakdowns = 0;
    while (true) {
      if (iterations_ >= opt_.max_iterations) return SolveStatus::IterationLimit;
      // Phase selection and costs.
      bool phase1 = false;
      for (int p = 0; p < m_; ++p)
        if (infeasibility(head_[p]) > 0.0) {
          phase1 = true;
          break;
        }
      if (phase1) {
        std::fill(phase_cost.begin(), phase_cost.end(), 0.0);
        for (int p = 0; p < m_; ++p) {
          int j = head_[p];
          if (x_[j] < lo_[j] - opt_.primal_tol) phase_cost[j] = -1.0;
          else if (x_[j] > up_[j] + opt_.primal_tol) phase_cost[j] = 1.0;
        }
        compute_duals(phase_cost);
      } else {
        compute_duals(cost_);
      }
      const bool bland = degenerate >= opt_.bland_after;
      // Pricing.
      int q = -1;
      double best = 0.0;
      for (int j = 0; j < n_ + m_; ++j) {
        if (status_[j] == VarStatus::Basic || lo_[j] == up_[j]) continue;
        double dj = d_[j];
        double score = 0.0;
        if (status_[j] == VarStatus::AtLower && dj < -opt_.dual_tol) score = -dj;
        else if (status_[j] == VarStatus::AtUpper && dj > opt_.dual_tol) score = dj;
        else if (status_[j] == VarStatus::AtZero && std::abs(dj) > opt_.dual_tol) score = std::abs(dj);
        if (score <= 0.0) continue;
        if (bland) {
          q = j;
          break;
        }
        if (score > best) {
          best = score;
          q = j;
        }
      }
      if (q < 0) {
        if (phase1) return SolveStatus::Infeasible;
        compute_duals(cost_);
        return SolveStatus::Optimal;
      }
      const double dir = d_[q] < 0.0 ? 1.0 : -1.0;
      load_column(q, alpha);
      lu_.ftran(alpha);

      // Ratio test (Harris two-pass with phase-1 aware targets).
      auto target_for = [&](int j, double rate, double& target) {
        // rate: d x_j / d t.
        if (rate < 0.0) {
          if (x_[j] > up_[j] + opt_.primal_tol) target = up_[j];
          else if (x_[j] >= lo_[j] - opt_.primal_tol) target = lo_[j];
          else return false;
        } else {
          if (x_[j] < lo_[j] - opt_.primal_tol) target = lo_[j];
          else if (x_[j] <= up_[j] + opt_.primal_tol) target = up_[j];
          else return false;
        }
        return std::isfinite(target);
      };
      double relaxed = kInf;
      for (int p = 0; p < m_; ++p) {
        double a = alpha[p];
        if (std::abs(a) <= opt_.pivot_tol) continue;
        int j = head_[p];
        double rate = -dir * a;
        double target;
        if (!target_for(j, rate, target)) continue;
        double slack = rate < 0.0 ? (x_[j] - target + opt_.primal_tol) : (target - x_[j] + opt_.primal_tol);
        relaxed = std::min(relaxed, std::max(slack, 0.0) / std::abs(rate));
      }
      double flip = boxed(q) ? up_[q] - lo_[q] : kInf;
      int leave = -1;
      double step = kInf;
      double leave_target = 0.0;
      if (std::isfinite(relaxed)) {
        double best_pivot = 0.0;
        for (int p = 0; p < m_; ++p) {
          double a = alpha[p];
          if (std::abs(a) <= opt_.pivot_tol) continue;
          int j = head_[p];
          double rate = -dir * a;
          double target;
          if (!target_for(j, rate, target)) continue;
          double t = std::max((target - x_[j]) / rate, 0.0);
          if (t > relaxed) continue;
          bool take;
          if (bland) take = leave < 0 || t < step - 1e-12 || (t <= step + 1e-12 && j < head_[leave]);
          else take = std::abs(a) > best_pivot;
          if (take) {
            best_pivot = std::abs(a);
            leave = p;
            step = t;
            leave_target = target;
          }
        }
      }
      if (std::isfinite(flip) && flip <= step) {
        // Bound flip, basis unchanged.
        for (int p = 0; p < m_; ++p) x_[head_[p]] -= flip * dir * alpha[p];
        status_[q] = status_[q] == VarStatus::AtLower ? VarStatus::AtUpper : VarStatus::AtLower;
        place_one(q);
        ++iterations_;
        degenerate = 0;
        continue;
      }
      if (leave < 0) {
        if (phase1) {
          // Should not happen; treat as numerical trouble.
          if (++breakdowns > 3) throw SolverFailure("builtin", "phase 1 ratio test failed");
          refactor();
          compute_primal();
          continue;
        }
        return SolveStatus::Unbounded;
      }
      if (std::abs(alpha[leave]) < 1e-7 && breakdowns < 3) {
        // Tiny pivot: refresh the factorization once before trusting it.
        ++breakdowns;
        refactor();
        compute_primal();
        continue;
      }
      for (int p = 0; p < m_; ++p) x_[head_[p]] -= step * dir * alpha[p];
      x_[q] += step * dir;
      int leaving = head_[leave];
      VarStatus ls = leave_target == lo_[leaving] ? VarStatus::AtLower : VarStatus::AtUpper;
      if (lo_[leaving] == up_[leaving]) ls = VarStatus::AtLower;
      pivot_in(q, leave, alpha, ls);
      ++iterations_;
      degenerate = step < 1e-12 ? degenerate + 1 : 0;
      if (step >= 1e-12) breakdowns = 0;
    }
  }

  // --- dual simplex ---------------------------------------------------------

  enum class DualOutcome { Optimal, Infeasible, NeedPrimal, IterationLimit };

  DualOutcome dual_simplex() {
    std::vector<double>& rho = buf_a_;
    std::vector<double>& alpha = buf_b_;
    std::vector<double>& row = buf_c_;
    row.assign(n_ + m_, 0.0);
    int degenerate = 0;
    int breakdowns = 0;
    while (true) {
      if (iterations_ >= opt_.max_iterations) return DualOutcome::IterationLimit;
      const bool bland = degenerate >= opt_.bland_after;
      // Leaving row: largest primal infeasibility.
      int p = -1;
      double worst = 0.0;
      for (int k = 0; k < m_; ++k) {
        double v = infeasibility(head_[k]);
        if (v <= 0.0) continue;
        if (bland) {
          if (p < 0 || head_[k] < head_[p]) p = k;
          continue;
        }
        if (v > worst) {
          worst = v;
          p = k;
        }
      }
      if (p < 0) return DualOutcome::Optimal;
      const int leaving = head_[p];
      const bool to_lower = x_[leaving] < lo_[leaving];
      const double target = to_lower ? lo_[leaving] : up_[leaving];

      // Pivot row.
      rho.assign(m_, 0.0);
      rho[p] = 1.0;
      lu_.btran(rho);
      for (int j = 0; j < n_; ++j) row[j] = 0.0;
      for (int i = 0; i < m_; ++i) {
        double ri = rho[i];
        row[n_ + i] = -ri;
        if (ri == 0.0) continue;
        for (int q = row_start_[i]; q < row_start_[i + 1]; ++q) row[row_col_[q]] += ri * row_val_[q];
      }

      // x_leaving = beta - sum_j row_j x_j. Eligible j move x_leaving toward target.
      auto eligible = [&](int j, double a) {
        if (status_[j] == VarStatus::Basic || lo_[j] == up_[j] || std::abs(a) <= opt_.pivot_tol) return false;
        bool inc = to_lower;  // need x_leaving to increase
        switch (status_[j]) {
          case VarStatus::AtLower: return inc ? a < 0.0 : a > 0.0;
          case VarStatus::AtUpper: return inc ? a > 0.0 : a < 0.0;
          case VarStatus::AtZero: return true;
          case VarStatus::Basic: return false;
        }
        return false;
      };
      double relaxed = kInf;
      for (int j = 0; j < n_ + m_; ++j) {
        double a = row[j];
        if (!eligible(j, a)) continue;
        relaxed = std::min(relaxed, (std::abs(d_[j]) + opt_.dual_tol) / std::abs(a));
      }
      if (!std::isfinite(relaxed)) return DualOutcome::Infeasible;
      int q = -1;
      double best_pivot = 0.0;
      double best_ratio = kInf;
      for (int j = 0; j < n_ + m_; ++j) {
        double a = row[j];
        if (!eligible(j, a)) continue;
        double ratio = std::abs(d_[j]) / std::abs(a);
        if (ratio > relaxed) continue;
        bool take;
        if (bland) take = q < 0 || ratio < best_ratio - 1e-12 || (ratio <= best_ratio + 1e-12 && j < q);
        else take = std::abs(a) > best_pivot;
        if (take) {
          best_pivot = std::abs(a);
          best_ratio = ratio;
          q = j;
        }
      }
      load_column(q, alpha);
      lu_.ftran(alpha);
      const double apq = alpha[p];
      if (std::abs(apq - row[q]) > 1e-7 * (1.0 + std::abs(apq)) || std::abs(apq) < 1e-10) {
        if (++breakdowns > 3) return DualOutcome::NeedPrimal;
        refactor();
        compute_primal();
        compute_duals(cost_);
        continue;
      }
      // Dual update.
      const double t = d_[q] / apq;
      for (int j = 0; j < n_ + m_; ++j) {
        if (status_[j] == VarStatus::Basic) continue;
        d_[j] -= t * row[j];
      }
      d_[q] = 0.0;
      d_[leaving] = -t;
      // Primal update.
      const double dxq = (x_[leaving] - target) / apq;
      for (int k = 0; k < m_; ++k) x_[head_[k]] -= dxq * alpha[k];
      x_[q] += dxq;
      VarStatus ls = to_lower ? VarStatus::AtLower : VarStatus::AtUpper;
      bool refreshed = lu_.num_updates() + 1 >= opt_.refactor_interval;
      pivot_in(q, p, alpha, ls);
      if (refreshed) compute_duals(cost_);
      ++iterations_;
      degenerate = std::abs(t) < 1e-12 ? degenerate + 1 : 0;
      if (std::abs(t) >= 1e-12) breakdowns = 0;
      // Round-off can leave a boxed nonbasic on the wrong side; flip it.
      if (refreshed && !dual_feasible_after_flips()) return DualOutcome::NeedPrimal;
    }
  }

  SimplexOptions opt_;
  int n_ = 0, m_ = 0;
  double offset_ = 0.0;
  std::vector<int> col_start_, col_row_;
  std::vector<double> col_val_;
  std::vector<int> row_start_, row_col_;
  std::vector<double> row_val_;

  std::vector<double> cost_, lo_, up_, x_, d_, y_;
  std::vector<VarStatus> status_;
  std::vector<int> head_, pos_;
  detail::BasisFactor lu_;
  bool factor_valid_ = false;
  long iterations_ = 0;
  std::vector<double> buf_a_, buf_b_, buf_c_;
};

}  // namespace ciesdro::solver
