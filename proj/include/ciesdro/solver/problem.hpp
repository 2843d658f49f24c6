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
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ciesdro::solver {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowSense : std::uint8_t { LessEqual, Equal, GreaterEqual };

struct Triplet {
  int row;
  int col;
  double value;
};

using Term = std::pair<int, double>;

/**
 * A minimization LP/MILP in sparse triplet form.
 *
 * Variables carry bounds, an objective coefficient, an optional binary flag
 * and an optional branching priority. Rows are `sum(a_ij x_j) <sense> rhs`.
 * Duplicate (row, col) triplets are summed.
 */
struct SparseProblem {
  std::vector<double> cost;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<std::uint8_t> binary;
  /// Higher priority binaries are branched on first. Zero by default.
  std::vector<int> priority;
  std::vector<std::string> var_names;

  std::vector<RowSense> sense;
  std::vector<double> rhs;
  std::vector<std::string> row_names;

  std::vector<Triplet> entries;
  double objective_offset = 0.0;

  int n_vars() const { return static_cast<int>(cost.size()); }
  int n_rows() const { return static_cast<int>(rhs.size()); }

  int add_variable(double lo, double up, double c, std::string name = {}) {
    cost.push_back(c);
    lower.push_back(lo);
    upper.push_back(up);
    binary.push_back(0);
    priority.push_back(0);
    var_names.push_back(std::move(name));
    return n_vars() - 1;
  }

  int add_binary(double c, std::string name = {}, int branch_priority = 0) {
    int j = add_variable(0.0, 1.0, c, std::move(name));
    binary[j] = 1;
    priority[j] = branch_priority;
    return j;
  }

  int add_row(std::span<const Term> terms, RowSense s, double b,
              std::string name = {}) {
    int r = n_rows();
    sense.push_back(s);
    rhs.push_back(b);
    row_names.push_back(std::move(name));
    for (const auto& [col, v] : terms) {
      if (v != 0.0) entries.push_back({r, col, v});
    }
    return r;
  }

  int add_row(std::initializer_list<Term> terms, RowSense s, double b,
              std::string name = {}) {
    return add_row(std::span<const Term>(terms.begin(), terms.size()), s, b,
                   std::move(name));
  }

  int num_binaries() const {
    return static_cast<int>(std::count(binary.begin(), binary.end(), 1));
  }

  /// Throws std::invalid_argument when an invariant is broken.
  void validate() const {
    const auto n = cost.size();
    if (lower.size() != n || upper.size() != n || binary.size() != n ||
        priority.size() != n)
      throw std::invalid_argument("SparseProblem: column arrays differ in length");
    if (sense.size() != rhs.size())
      throw std::invalid_argument("SparseProblem: row arrays differ in length");
    for (std::size_t j = 0; j < n; ++j) {
      if (std::isnan(lower[j]) || std::isnan(upper[j]) || !std::isfinite(cost[j]))
        throw std::invalid_argument("SparseProblem: bad bound or cost on column " +
                                    std::to_string(j));
      if (binary[j] && (lower[j] < 0.0 || upper[j] > 1.0))
        throw std::invalid_argument("SparseProblem: binary column " +
                                    std::to_string(j) + " has bounds outside [0,1]");
    }
    for (double b : rhs)
      if (!std::isfinite(b)) throw std::invalid_argument("SparseProblem: non-finite rhs");
    for (const auto& t : entries) {
      if (t.row < 0 || t.row >= n_rows() || t.col < 0 || t.col >= n_vars())
        throw std::invalid_argument("SparseProblem: triplet index out of range");
      if (!std::isfinite(t.value))
        throw std::invalid_argument("SparseProblem: non-finite coefficient");
    }
  }

  double objective(std::span<const double> x) const {
    double z = objective_offset;
    for (int j = 0; j < n_vars(); ++j) z += cost[j] * x[j];
    return z;
  }

  std::vector<double> row_activity(std::span<const double> x) const {
    std::vector<double> act(rhs.size(), 0.0);
    for (const auto& t : entries) act[t.row] += t.value * x[t.col];
    return act;
  }

  /// Largest bound or row violation of `x` (zero when feasible).
  double max_violation(std::span<const double> x) const {
    double worst = 0.0;
    for (int j = 0; j < n_vars(); ++j) {
      worst = std::max(worst, lower[j] - x[j]);
      worst = std::max(worst, x[j] - upper[j]);
    }
    auto act = row_activity(x);
    for (int i = 0; i < n_rows(); ++i) {
      double r = act[i] - rhs[i];
      switch (sense[i]) {
        case RowSense::LessEqual: worst = std::max(worst, r); break;
        case RowSense::GreaterEqual: worst = std::max(worst, -r); break;
        case RowSense::Equal: worst = std::max(worst, std::abs(r)); break;
      }
    }
    return worst;
  }

  /// Names of rows violated by more than `tol`.
  std::vector<std::string> violated_rows(std::span<const double> x, double tol) const {
    std::vector<std::string> out;
    auto act = row_activity(x);
    for (int i = 0; i < n_rows(); ++i) {
      double r = act[i] - rhs[i];
      bool bad = (sense[i] == RowSense::LessEqual && r > tol) ||
                 (sense[i] == RowSense::GreaterEqual && -r > tol) ||
                 (sense[i] == RowSense::Equal && std::abs(r) > tol);
      if (bad) out.push_back(row_names[i].empty() ? "row" + std::to_string(i) : row_names[i]);
    }
    for (int j = 0; j < n_vars(); ++j) {
      if (x[j] < lower[j] - tol || x[j] > upper[j] + tol)
        out.push_back("bound:" + (var_names[j].empty() ? "x" + std::to_string(j) : var_names[j]));
    }
    return out;
  }
};

enum class SolveStatus : std::uint8_t { Optimal, Infeasible, Unbounded, IterationLimit };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::IterationLimit: return "iteration-limit";
  }
  return "unknown";
}

/// Simplex status of a structural or logical column.
enum class VarStatus : std::uint8_t { Basic, AtLower, AtUpper, AtZero };

struct Solution {
  SolveStatus status = SolveStatus::Infeasible;
  std::vector<double> values;
  double objective = 0.0;
  /// Best proven lower bound; equals `objective` for LPs.
  double bound = -kInf;
  /// Row duals (d objective / d rhs); present for LP solves only.
  std::optional<std::vector<double>> row_duals;
  std::optional<std::vector<double>> reduced_costs;
  /// Optimal basis of the LP, or of the MILP root relaxation.
  std::optional<std::vector<VarStatus>> basis;
  long iterations = 0;
  long nodes = 0;

  bool optimal() const { return status == SolveStatus::Optimal; }
};

/// Copy of `p` with the listed columns fixed at `values` and removed.
/// Their contributions move into the rhs and the objective offset; the
/// returned map gives each kept column's original index.
inline std::pair<SparseProblem, std::vector<int>> substitute_fixed(
    const SparseProblem& p, std::span<const int> cols, std::span<const double> values) {
  if (cols.size() != values.size())
    throw std::invalid_argument("substitute_fixed: size mismatch");
  std::vector<double> fixed(p.n_vars(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t k = 0; k < cols.size(); ++k) fixed[cols[k]] = values[k];

  SparseProblem out;
  std::vector<int> new_index(p.n_vars(), -1);
  std::vector<int> kept;
  out.objective_offset = p.objective_offset;
  for (int j = 0; j < p.n_vars(); ++j) {
    if (!std::isnan(fixed[j])) {
      out.objective_offset += p.cost[j] * fixed[j];
      continue;
    }
    new_index[j] = out.n_vars();
    kept.push_back(j);
    out.cost.push_back(p.cost[j]);
    out.lower.push_back(p.lower[j]);
    out.upper.push_back(p.upper[j]);
    out.binary.push_back(p.binary[j]);
    out.priority.push_back(p.priority[j]);
    out.var_names.push_back(p.var_names[j]);
  }
  out.sense = p.sense;
  out.rhs = p.rhs;
  out.row_names = p.row_names;
  out.entries.reserve(p.entries.size());
  for (const auto& t : p.entries) {
    if (new_index[t.col] < 0)
      out.rhs[t.row] -= t.value * fixed[t.col];
    else
      out.entries.push_back({t.row, new_index[t.col], t.value});
  }
  return {std::move(out), std::move(kept)};
}

/// Plain-text LP-style listing for debugging. Not a stable format.
inline void dump_lp(const SparseProblem& p, std::ostream& os) {
  auto name = [&](int j) {
    return p.var_names[j].empty() ? "x" + std::to_string(j) : p.var_names[j];
  };
  os << "Minimize\n obj:";
  for (int j = 0; j < p.n_vars(); ++j)
    if (p.cost[j] != 0.0) os << ' ' << (p.cost[j] < 0 ? "- " : "+ ") << std::abs(p.cost[j]) << ' ' << name(j);
  if (p.objective_offset != 0.0) os << " + " << p.objective_offset;
  os << "\nSubject To\n";
  std::vector<std::vector<Term>> rows(p.n_rows());
  for (const auto& t : p.entries) rows[t.row].push_back({t.col, t.value});
  for (int i = 0; i < p.n_rows(); ++i) {
    os << ' ' << (p.row_names[i].empty() ? "r" + std::to_string(i) : p.row_names[i]) << ':';
    for (const auto& [j, v] : rows[i]) os << ' ' << (v < 0 ? "- " : "+ ") << std::abs(v) << ' ' << name(j);
    os << (p.sense[i] == RowSense::LessEqual ? " <= " : p.sense[i] == RowSense::Equal ? " = " : " >= ")
       << p.rhs[i] << '\n';
  }
  os << "Bounds\n";
  for (int j = 0; j < p.n_vars(); ++j) os << ' ' << p.lower[j] << " <= " << name(j) << " <= " << p.upper[j] << '\n';
  if (p.num_binaries() > 0) {
    os << "Binaries\n";
    for (int j = 0; j < p.n_vars(); ++j)
      if (p.binary[j]) os << ' ' << name(j) << '\n';
  }
  os << "End\n";
}

}  // namespace ciesdro::solver
