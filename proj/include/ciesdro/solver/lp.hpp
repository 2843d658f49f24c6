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

#include "ciesdro/solver/problem.hpp"
#include "ciesdro/solver/simplex.hpp"

namespace ciesdro::solver {

/// Solves the LP relaxation of `problem` (binary flags are ignored).
inline Solution solve_lp(const SparseProblem& problem, SimplexOptions opt = {},
                         const std::vector<VarStatus>* start = nullptr) {
  SimplexEngine engine(problem, opt);
  if (start) engine.set_basis(*start);
  Solution sol;
  sol.status = engine.solve();
  sol.iterations = engine.iterations();
  if (sol.status == SolveStatus::Optimal) {
    sol.values = engine.values();
    sol.objective = engine.objective();
    sol.bound = sol.objective;
    sol.row_duals = engine.row_duals();
    sol.reduced_costs = engine.reduced_costs();
    sol.basis = engine.basis();
  }
  return sol;
}

/// Objective of the LP dual built from row duals and reduced costs:
/// each multiplier is paired with the bound its sign selects. Returns
/// +/-inf when a multiplier points at an infinite bound.
inline double dual_objective(const SparseProblem& p, const std::vector<double>& y,
                             const std::vector<double>& reduced, double tol = 1e-9) {
  double z = p.objective_offset;
  for (int i = 0; i < p.n_rows(); ++i) {
    double yi = y[i];
    if (std::abs(yi) <= tol) continue;
    bool lower_side = yi > 0.0;
    bool has_lower = p.sense[i] != RowSense::LessEqual;
    bool has_upper = p.sense[i] != RowSense::GreaterEqual;
    if ((lower_side && !has_lower) || (!lower_side && !has_upper)) return -kInf;
    z += yi * p.rhs[i];
  }
  for (int j = 0; j < p.n_vars(); ++j) {
    double dj = reduced[j];
    if (std::abs(dj) <= tol) continue;
    double b = dj > 0.0 ? p.lower[j] : p.upper[j];
    if (!std::isfinite(b)) return -kInf;
    z += dj * b;
  }
  return z;
}

}  // namespace ciesdro::solver
