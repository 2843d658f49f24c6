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
#include <memory>
#include <queue>
#include <tuple>
#include <vector>

#include "ciesdro/solver/lp.hpp"
#include "ciesdro/solver/problem.hpp"
#include "ciesdro/solver/simplex.hpp"

namespace ciesdro::solver {

struct MilpOptions {
  /// Absolute optimality gap.
  double gap = 1e-6;
  long node_limit = 1'000'000;
  double integrality_tol = 1e-6;
  SimplexOptions lp;
  /// Starting basis for the root relaxation; ignored unless its size is
  /// n_vars + n_rows with exactly n_rows basics.
  std::shared_ptr<const std::vector<VarStatus>> start_basis;
};

namespace detail {

struct BranchNode {
  double bound;
  int depth;
  long id;
  // Bound changes relative to the root: (column, lower, upper).
  std::vector<std::tuple<int, double, double>> fixes;
  std::shared_ptr<const std::vector<VarStatus>> basis;
};

struct NodeOrder {
  // Best bound first; deeper nodes first among equal bounds; then FIFO.
  bool operator()(const BranchNode& a, const BranchNode& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.id > b.id;
  }
};

}  // namespace detail

/**
 * Best-first branch and bound over the binary columns.
 *
 * Each node re-solves the LP from its parent's optimal basis, which the
 * engine hands to the dual simplex. Branching picks, among the fractional
 * binaries of the highest priority class, the one closest to 0.5 (lowest
 * index on ties). Until an incumbent exists the search plunges into the
 * child on the rounding side. The returned values come from a final LP
 * with the binaries fixed at their rounded incumbent values.
 */
inline Solution solve_milp(const SparseProblem& problem, const MilpOptions& opt = {}) {
  problem.validate();
  if (problem.num_binaries() == 0) return solve_lp(problem, opt.lp, opt.start_basis.get());

  SimplexEngine engine(problem, opt.lp);
  const int n = problem.n_vars();
  std::vector<int> ints;
  for (int j = 0; j < n; ++j)
    if (problem.binary[j]) ints.push_back(j);

  Solution best;
  best.status = SolveStatus::Infeasible;
  double incumbent = kInf;
  std::vector<double> incumbent_x;
  long nodes = 0;
  long iterations = 0;
  long next_id = 0;

  std::priority_queue<detail::BranchNode, std::vector<detail::BranchNode>, detail::NodeOrder> open;
  open.push({-kInf, 0, next_id++, {}, opt.start_basis});
  std::shared_ptr<const std::vector<VarStatus>> incumbent_basis;
  std::vector<detail::BranchNode> plunge;
  bool limit_hit = false;
  // Smallest bound among nodes discarded by the gap test.
  double pruned_min = kInf;

  auto apply_fixes = [&](const detail::BranchNode& node) {
    for (int j : ints) engine.set_bounds(j, problem.lower[j], problem.upper[j]);
    for (const auto& [j, lo, up] : node.fixes) engine.set_bounds(j, lo, up);
  };

  while (!open.empty() || !plunge.empty()) {
    detail::BranchNode node;
    if (!plunge.empty()) {
      node = std::move(plunge.back());
      plunge.pop_back();
    } else {
      node = open.top();
      open.pop();
    }
    if (node.bound >= incumbent - opt.gap) {
      pruned_min = std::min(pruned_min, node.bound);
      continue;
    }
    if (nodes >= opt.node_limit) {
      limit_hit = true;
      open.push(std::move(node));
      break;
    }
    ++nodes;
    apply_fixes(node);
    if (node.basis) engine.set_basis(*node.basis);
    else engine.reset_basis();
    SolveStatus st = engine.solve();
    iterations += engine.iterations();
    if (st == SolveStatus::Infeasible) continue;
    if (st == SolveStatus::Unbounded) {
      best.status = SolveStatus::Unbounded;
      best.nodes = nodes;
      best.iterations = iterations;
      return best;
    }
    if (st != SolveStatus::Optimal) throw SolverFailure("builtin", "node LP did not reach optimality");
    if (nodes == 1) best.basis = engine.basis();
    double z = engine.objective();
    if (z >= incumbent - opt.gap) {
      pruned_min = std::min(pruned_min, z);
      continue;
    }
    auto x = engine.values();

    int branch = -1;
    double branch_score = kInf;
    int branch_priority = 0;
    for (int j : ints) {
      double f = x[j] - std::floor(x[j]);
      if (f <= opt.integrality_tol || f >= 1.0 - opt.integrality_tol) continue;
      double score = std::abs(f - 0.5);
      int pr = problem.priority[j];
      if (branch < 0 || pr > branch_priority || (pr == branch_priority && score < branch_score)) {
        branch = j;
        branch_score = score;
        branch_priority = pr;
      }
    }
    if (branch < 0) {
      incumbent = z;
      incumbent_x = std::move(x);
      incumbent_basis = std::make_shared<const std::vector<VarStatus>>(engine.basis());
      continue;
    }
    auto basis = std::make_shared<const std::vector<VarStatus>>(engine.basis());
    double v = x[branch];
    detail::BranchNode down{z, node.depth + 1, next_id++, node.fixes, basis};
    down.fixes.emplace_back(branch, problem.lower[branch], std::floor(v));
    detail::BranchNode up{z, node.depth + 1, next_id++, node.fixes, basis};
    up.fixes.emplace_back(branch, std::ceil(v), problem.upper[branch]);
    if (!std::isfinite(incumbent)) {
      // Plunge toward the rounding side; the sibling waits in the queue.
      bool round_up = v - std::floor(v) >= 0.5;
      open.push(round_up ? std::move(down) : std::move(up));
      plunge.push_back(round_up ? std::move(up) : std::move(down));
    } else {
      open.push(std::move(down));
      open.push(std::move(up));
    }
  }

  best.nodes = nodes;
  best.iterations = iterations;
  if (incumbent_x.empty()) {
    best.status = limit_hit ? SolveStatus::IterationLimit : SolveStatus::Infeasible;
    return best;
  }

  // Polish: fix binaries at their rounded values and re-solve the LP.
  SparseProblem fixed = problem;
  for (int j : ints) {
    double r = std::round(incumbent_x[j]);
    fixed.lower[j] = fixed.upper[j] = r;
  }
  Solution polished = solve_lp(fixed, opt.lp, incumbent_basis.get());
  if (polished.status == SolveStatus::Optimal) {
    best.values = std::move(polished.values);
    best.objective = polished.objective;
    best.iterations += polished.iterations;
  } else {
    best.values = incumbent_x;
    for (int j : ints) best.values[j] = std::round(best.values[j]);
    best.objective = problem.objective(best.values);
  }
  double lower_bound = std::min(incumbent, pruned_min);
  if (!open.empty()) lower_bound = std::min(lower_bound, open.top().bound);
  for (const auto& nd : plunge) lower_bound = std::min(lower_bound, nd.bound);
  best.bound = std::min(lower_bound, best.objective);
  best.status = limit_hit ? SolveStatus::IterationLimit : SolveStatus::Optimal;
  return best;
}

}  // namespace ciesdro::solver
