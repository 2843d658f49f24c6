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
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <memory>
#include <mutex>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "ciesdro/ambiguity/worst_case.hpp"
#include "ciesdro/cies/costs.hpp"
#include "ciesdro/cies/model.hpp"
#include "ciesdro/scenario/scenario_set.hpp"
#include "ciesdro/solver/backend.hpp"
#include "ciesdro/solver/milp.hpp"

namespace ciesdro::ccg {

/// The system cannot serve its load: no commitment, or no recourse for
/// some scenario, is feasible. `families` names the constraint groups
/// that had to be relaxed.
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(const std::string& what, std::vector<std::string> families)
      : std::runtime_error(what), families_(std::move(families)) {}
  const std::vector<std::string>& families() const { return families_; }

 private:
  std::vector<std::string> families_;
};

/**
 * Constraint groups that must be relaxed to make `p` feasible, found by
 * an elastic LP: every row gets a pair of unit-cost slacks and the original
 * costs are dropped. Group = row name with its trailing period index cut.
 */
inline std::vector<std::string> infeasible_families(const solver::SparseProblem& p) {
  solver::SparseProblem e = p;
  std::fill(e.cost.begin(), e.cost.end(), 0.0);
  std::fill(e.binary.begin(), e.binary.end(), 0);
  e.objective_offset = 0.0;
  const int m = p.n_rows();
  std::vector<int> up(m), down(m);
  for (int i = 0; i < m; ++i) {
    up[i] = e.add_variable(0.0, solver::kInf, 1.0);
    down[i] = e.add_variable(0.0, solver::kInf, 1.0);
    e.entries.push_back({i, up[i], 1.0});
    e.entries.push_back({i, down[i], -1.0});
  }
  auto sol = solver::solve_lp(e);
  std::set<std::string> fam;
  if (!sol.optimal()) return {"bounds"};
  for (int i = 0; i < m; ++i) {
    if (sol.values[up[i]] + sol.values[down[i]] <= 1e-7) continue;
    std::string n = p.row_names[i];
    while (!n.empty() && (std::isdigit(static_cast<unsigned char>(n.back())) || n.back() == '_')) n.pop_back();
    fam.insert(n.empty() ? "row" : n);
  }
  return {fam.begin(), fam.end()};
}

struct SolveMode {
  enum class Kind { Dro, Stochastic, Robust, Deterministic, Budget };
  /// Which norm balls a DRO run keeps. A dropped ball gets a budget large
  /// enough to never bind (θ_1 = 2, θ_∞ = 1).
  enum class Norm { Both, OneOnly, InfOnly };
  Kind kind = Kind::Dro;
  Norm norm = Norm::Both;
  double alpha1 = 0.99;
  double alphainf = 0.99;
  long m_hist = 5000;
  /// Used by Kind::Budget only.
  double theta1 = 0.0;
  double thetainf = 0.0;
  /// Deterministic mode scales the mean scenario by (1 − box).
  double box = 0.0;

  static SolveMode dro(double a1, double ainf, long m, Norm norm = Norm::Both) {
    SolveMode s;
    s.alpha1 = a1;
    s.alphainf = ainf;
    s.m_hist = m;
    s.norm = norm;
    return s;
  }
  static SolveMode stochastic() { return with(Kind::Stochastic); }
  static SolveMode robust() { return with(Kind::Robust); }
  static SolveMode deterministic(double box = 0.0) {
    auto s = with(Kind::Deterministic);
    s.box = box;
    return s;
  }
  static SolveMode budget(double theta1, double thetainf) {
    auto s = with(Kind::Budget);
    s.theta1 = theta1;
    s.thetainf = thetainf;
    return s;
  }

  std::string name() const {
    switch (kind) {
      case Kind::Dro:
        return norm == Norm::Both ? "dro" : norm == Norm::OneOnly ? "dro-1norm" : "dro-infnorm";
      case Kind::Stochastic: return "stochastic";
      case Kind::Robust: return "robust";
      case Kind::Deterministic: return "deterministic";
      case Kind::Budget: return "budget";
    }
    return "unknown";
  }

  /// Scenario set the mode optimizes over.
  scenario::ScenarioSet scenarios(const scenario::ScenarioSet& s) const {
    if (kind != Kind::Deterministic) return s;
    if (!(box >= 0.0 && box < 1.0)) throw std::invalid_argument("box must lie in [0,1)");
    return s.mean(1.0 - box);
  }

  ambiguity::AmbiguityBudget budget_for(int n_s) const {
    switch (kind) {
      case Kind::Dro: {
        auto b = ambiguity::compute_budgets(m_hist, n_s, alpha1, alphainf);
        if (norm == Norm::OneOnly) b.thetainf = 1.0;
        if (norm == Norm::InfOnly) b.theta1 = 2.0;
        return b;
      }
      case Kind::Stochastic:
      case Kind::Deterministic: return ambiguity::AmbiguityBudget::fixed(n_s, 0.0, 0.0);
      case Kind::Robust: return ambiguity::AmbiguityBudget::fixed(n_s, 2.0, 1.0);
      case Kind::Budget: return ambiguity::AmbiguityBudget::fixed(n_s, theta1, thetainf);
    }
    throw std::logic_error("unreachable");
  }

 private:
  static SolveMode with(Kind k) {
    SolveMode s;
    s.kind = k;
    return s;
  }
};

enum class CopyPolicy {
  /// One recourse copy per (iteration, scenario).
  PerIteration,
  /// One copy per scenario, shared by every epigraph row. Same optimum:
  /// each row is separable in the copies and weights are non-negative.
  Shared
};

struct IterationRecord {
  int iteration = 0;
  double lb = 0.0;
  double ub = 0.0;
  /// Running minimum of ub.
  double ub_best = 0.0;
  double gap = 0.0;
  double master_objective = 0.0;
  double first_stage_cost = 0.0;
  std::string master_status;
  long master_nodes = 0;
  int master_vars = 0;
  int master_rows = 0;
  std::vector<double> p;
  std::vector<double> f;
  double seconds = 0.0;
};

struct RunOptions {
  double tol = 0.01;
  int max_iter = 25;
  solver::MilpOptions milp;
  CopyPolicy copies = CopyPolicy::Shared;
  /// Worker threads for the scenario LPs.
  int threads = 1;
  std::shared_ptr<const solver::Backend> backend;
  std::function<void(const IterationRecord&)> on_iteration;
};

struct MasterResult {
  cies::FirstStageDecision u;
  double eta = 0.0;
  double objective = 0.0;
  double bound = 0.0;
  solver::SolveStatus status = solver::SolveStatus::Optimal;
  long nodes = 0;
};

/// Master problem: first-stage fragment, η, and the accumulated copies.
class Master {
 public:
  Master(const cies::CiesConfig& c, const scenario::ScenarioSet& s, CopyPolicy policy)
      : config_(c), first_(c), second_(c), policy_(policy) {
    problem_ = cies::build_first_stage(c);
    eta_ = problem_.add_variable(-solver::kInf, solver::kInf, 1.0, "eta");
    for (int k = 0; k < s.n_s(); ++k) blocks_.push_back(cies::build_recourse_block(c, cies::Availability{s.pv[k], s.wt[k]}));
  }

  int n_scenarios() const { return static_cast<int>(blocks_.size()); }
  int cut_count() const { return cuts_; }
  const solver::SparseProblem& problem() const { return problem_; }

  /// Adds the epigraph row for weights `p`, with fresh copies unless they
  /// are shared and already present.
  void add_cut(const std::vector<double>& p) {
    if (static_cast<int>(p.size()) != n_scenarios()) throw std::invalid_argument("master: weight length mismatch");
    bool fresh = policy_ == CopyPolicy::PerIteration || copy_base_.empty();
    std::vector<int> base(n_scenarios());
    for (int s = 0; s < n_scenarios(); ++s) {
      if (fresh) {
        base[s] = append_copy(s);
        if (policy_ == CopyPolicy::Shared) copy_base_.push_back(base[s]);
      } else {
        base[s] = copy_base_[s];
      }
    }
    // η − Σ_s p_s·(c_s·v_s + b·Σξ) ≥ Σ_s p_s·offset_s
    std::vector<solver::Term> row{{eta_, 1.0}};
    double rhs = 0.0;
    const int F = first_.size();
    std::vector<double> first_coef(F, 0.0);
    for (int s = 0; s < n_scenarios(); ++s) {
      if (p[s] == 0.0) continue;
      const auto& b = blocks_[s];
      rhs += p[s] * b.objective_offset;
      for (int j = 0; j < F; ++j) first_coef[j] -= p[s] * b.cost[j];
      for (int j = F; j < b.n_vars(); ++j)
        if (b.cost[j] != 0.0) row.push_back({base[s] + j - F, -p[s] * b.cost[j]});
    }
    for (int j = 0; j < F; ++j)
      if (first_coef[j] != 0.0) row.push_back({j, first_coef[j]});
    problem_.add_row(row, solver::RowSense::GreaterEqual, rhs, "epigraph_" + std::to_string(cuts_));
    ++cuts_;
  }

  MasterResult solve(const solver::Backend& backend, const solver::MilpOptions& opt) {
    if (cuts_ == 0) throw std::logic_error("master: no cuts added");
    solver::MilpOptions o = opt;
    if (!o.start_basis && root_basis_) o.start_basis = extended_basis();
    auto sol = backend.solve(problem_, o);
    if (sol.basis) {
      root_basis_ = std::make_shared<const std::vector<solver::VarStatus>>(std::move(*sol.basis));
      basis_n_ = problem_.n_vars();
      basis_m_ = problem_.n_rows();
    }
    if (sol.status == solver::SolveStatus::Infeasible) {
      throw InfeasibleError("master problem infeasible: no commitment serves every scenario",
                            diagnose());
    }
    if (sol.status == solver::SolveStatus::Unbounded) throw solver::SolverFailure(backend.name(), "master unbounded");
    if (sol.values.empty()) throw solver::SolverFailure(backend.name(), "master returned no incumbent");
    MasterResult r;
    r.u = cies::FirstStageDecision::from_vector(first_, sol.values);
    r.eta = sol.values[eta_];
    r.objective = sol.objective;
    r.bound = std::isfinite(sol.bound) ? std::min(sol.bound, sol.objective) : sol.objective;
    r.status = sol.status;
    r.nodes = sol.nodes;
    return r;
  }

 private:
  int append_copy(int s) {
    const auto& b = blocks_[s];
    const int F = first_.size();
    const int base = problem_.n_vars();
    const std::string tag = "w" + std::to_string(cuts_) + "_s" + std::to_string(s) + "_";
    for (int j = F; j < b.n_vars(); ++j) problem_.add_variable(b.lower[j], b.upper[j], 0.0, tag + b.var_names[j]);
    const int row0 = problem_.n_rows();
    for (int i = 0; i < b.n_rows(); ++i) {
      problem_.sense.push_back(b.sense[i]);
      problem_.rhs.push_back(b.rhs[i]);
      problem_.row_names.push_back(tag + b.row_names[i]);
    }
    for (const auto& t : b.entries)
      problem_.entries.push_back({row0 + t.row, t.col < F ? t.col : base + t.col - F, t.value});
    return base;
  }

  // Previous root basis grown to the current shape: new columns at their
  // lower bound, new rows with a basic logical.
  std::shared_ptr<const std::vector<solver::VarStatus>> extended_basis() const {
    const int n = problem_.n_vars(), m = problem_.n_rows();
    if (n == basis_n_ && m == basis_m_) return root_basis_;
    std::vector<solver::VarStatus> st(n + m, solver::VarStatus::AtLower);
    const auto& old = *root_basis_;
    for (int j = 0; j < basis_n_; ++j) st[j] = old[j];
    for (int i = 0; i < basis_m_; ++i) st[n + i] = old[basis_n_ + i];
    for (int i = basis_m_; i < m; ++i) st[n + i] = solver::VarStatus::Basic;
    return std::make_shared<const std::vector<solver::VarStatus>>(std::move(st));
  }

  std::vector<std::string> diagnose() const {
    // All units on and storage idle is the most permissive plan.
    auto u = cies::FirstStageDecision::zeros(config_);
    std::fill(u.xi.begin(), u.xi.end(), 1);
    for (int i = 0; i < u.G; ++i) u.y[i * u.T] = config_.mtg.initial_status ? 0 : 1;
    std::set<std::string> fam;
    for (const auto& b : blocks_) {
      std::vector<int> cols(first_.size());
      for (int j = 0; j < first_.size(); ++j) cols[j] = j;
      auto x = u.to_vector();
      auto lp = solver::substitute_fixed(b, cols, x).first;
      for (auto& f : infeasible_families(lp)) fam.insert(f);
    }
    return {fam.begin(), fam.end()};
  }

  cies::CiesConfig config_;
  cies::FirstStageLayout first_;
  cies::SecondStageLayout second_;
  CopyPolicy policy_;
  solver::SparseProblem problem_;
  int eta_ = -1;
  int cuts_ = 0;
  std::vector<solver::SparseProblem> blocks_;
  std::vector<int> copy_base_;
  std::shared_ptr<const std::vector<solver::VarStatus>> root_basis_;
  int basis_n_ = 0;
  int basis_m_ = 0;
};

struct SubproblemResult {
  /// Recourse cost per scenario, f_s(u).
  std::vector<double> f;
  ambiguity::WorstCaseDistribution worst;
  /// Σ p*_s f_s.
  double expected = 0.0;
  /// First-stage cost + expected.
  double ub = 0.0;
  std::vector<cies::SecondStageDecision> dispatch;
};

/// Scenario LPs for a fixed commitment, then the worst-case weights.
/// Results are gathered in scenario order whatever the thread count.
inline SubproblemResult solve_subproblem(const cies::CiesConfig& c, const cies::FirstStageDecision& u,
                                         const scenario::ScenarioSet& s, const ambiguity::AmbiguityBudget& budget,
                                         const solver::Backend& backend, int threads = 1) {
  const int n = s.n_s();
  SubproblemResult r;
  r.f.assign(n, 0.0);
  r.dispatch.resize(n);
  std::vector<std::exception_ptr> errors(n);
  const cies::SecondStageLayout L(c);
  auto work = [&](int k) {
    try {
      auto lp = cies::build_second_stage(c, cies::Availability{s.pv[k], s.wt[k]}, u);
      auto sol = backend.solve(lp, solver::MilpOptions{});
      if (sol.status == solver::SolveStatus::Infeasible)
        throw InfeasibleError("recourse infeasible in scenario " + std::to_string(k), infeasible_families(lp));
      if (!sol.optimal())
        throw solver::SolverFailure(backend.name(), "scenario " + std::to_string(k) + " LP ended " +
                                                        solver::to_string(sol.status));
      r.f[k] = sol.objective;
      r.dispatch[k] = cies::SecondStageDecision::from_vector(L, sol.values);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  };
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int k = 0; k < n; ++k) work(k);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w)
      pool.emplace_back([&] {
        for (int k = next++; k < n; k = next++) work(k);
      });
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  r.worst = ambiguity::worst_case_lp(s.p0, r.f, budget);
  r.expected = r.worst.objective;
  r.ub = cies::first_stage_cost(c, u) + r.expected;
  return r;
}

struct ScheduleResult {
  SolveMode mode;
  ambiguity::AmbiguityBudget budget;
  /// Scenarios actually optimized over (the mean one in deterministic mode).
  scenario::ScenarioSet scenarios;
  std::vector<IterationRecord> trace;
  cies::FirstStageDecision u;
  std::vector<cies::SecondStageDecision> dispatch;
  std::vector<cies::CostBreakdown> costs;
  std::vector<double> f;
  std::vector<double> p_star;
  double total = 0.0;
  double lb = 0.0;
  double ub = 0.0;
  bool converged = false;
  int iterations = 0;
  /// Percent of worst-case-weighted availability left unused.
  double curtailment_rate = 0.0;
  double seconds = 0.0;
};

inline double curtailment_rate(const scenario::ScenarioSet& s, const std::vector<double>& p,
                               const std::vector<cies::SecondStageDecision>& v) {
  double lost = 0.0, avail = 0.0;
  for (int k = 0; k < s.n_s(); ++k)
    for (std::size_t t = 0; t < s.pv[k].size(); ++t) {
      avail += p[k] * (s.pv[k][t] + s.wt[k][t]);
      lost += p[k] * ((s.pv[k][t] - v[k].p_pv[t]) + (s.wt[k][t] - v[k].p_wt[t]));
    }
  return avail > 0.0 ? std::clamp(100.0 * lost / avail, 0.0, 100.0) : 0.0;
}

/**
 * Column-and-constraint generation. Each iteration solves the master for
 * (u, LB), evaluates u on every scenario, finds the worst-case weights and
 * adds them as a new cut. Stops when the best upper bound is within `tol`
 * of the lower bound. The reported plan is the one with the best upper
 * bound, with dispatches from its scenario LPs.
 */
inline ScheduleResult run(const cies::CiesConfig& config, const scenario::ScenarioSet& input, const SolveMode& mode,
                          const RunOptions& opt = {}) {
  using clock = std::chrono::steady_clock;
  if (!(opt.tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (opt.max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
  config.validate();
  input.validate();
  auto backend = opt.backend ? opt.backend : std::make_shared<solver::BuiltinBackend>();
  const auto t_start = clock::now();

  ScheduleResult out;
  out.mode = mode;
  out.scenarios = mode.scenarios(input);
  out.budget = mode.budget_for(out.scenarios.n_s());
  const auto& S = out.scenarios;

  Master master(config, S, opt.copies);
  std::vector<double> p = S.p0;
  double lb = -solver::kInf, ub_best = solver::kInf;
  SubproblemResult best;
  for (int w = 1; w <= opt.max_iter; ++w) {
    const auto t_iter = clock::now();
    master.add_cut(p);
    auto m = master.solve(*backend, opt.milp);
    lb = std::max(lb, m.bound);
    auto sub = solve_subproblem(config, m.u, S, out.budget, *backend, opt.threads);
    if (sub.ub < ub_best) {
      ub_best = sub.ub;
      out.u = m.u;
      best = sub;
    }
    IterationRecord rec;
    rec.iteration = w;
    rec.lb = lb;
    rec.ub = sub.ub;
    rec.ub_best = ub_best;
    rec.gap = ub_best - lb;
    rec.master_objective = m.objective;
    rec.first_stage_cost = cies::first_stage_cost(config, m.u);
    rec.master_status = solver::to_string(m.status);
    rec.master_nodes = m.nodes;
    rec.master_vars = master.problem().n_vars();
    rec.master_rows = master.problem().n_rows();
    rec.p = sub.worst.p;
    rec.f = sub.f;
    rec.seconds = std::chrono::duration<double>(clock::now() - t_iter).count();
    out.trace.push_back(rec);
    if (opt.on_iteration) opt.on_iteration(rec);
    out.iterations = w;
    if (ub_best - lb <= opt.tol) {
      out.converged = true;
      break;
    }
    p = sub.worst.p;
  }
  out.lb = lb;
  out.ub = ub_best;
  out.total = ub_best;
  out.f = best.f;
  out.p_star = best.worst.p;
  out.dispatch = best.dispatch;
  for (int k = 0; k < S.n_s(); ++k)
    out.costs.push_back(
        cies::cost_breakdown(config, out.u, out.dispatch[k], cies::Availability{S.pv[k], S.wt[k]}));
  out.curtailment_rate = curtailment_rate(S, out.p_star, out.dispatch);
  out.seconds = std::chrono::duration<double>(clock::now() - t_start).count();
  return out;
}

}  // namespace ciesdro::ccg
