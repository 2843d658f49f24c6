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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Usage: acceptance [data_dir] [work_dir]

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ciesdro/ambiguity/worst_case.hpp"
#include "ciesdro/ccg/ccg.hpp"
#include "ciesdro/cli/app.hpp"
#include "ciesdro/io/report.hpp"
#include "ciesdro/scenario/fixture.hpp"
#include "ciesdro/solver/lp.hpp"
#include "ciesdro/solver/milp.hpp"
#include "oracles.hpp"

namespace {

namespace fs = std::filesystem;
using namespace ciesdro;
using clock_type = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& why) {
    if (!ok && pass) {
      pass = false;
      detail = why;
    }
  }
};

struct Context {
  fs::path data;
  fs::path work;
  cies::CiesConfig config;
  scenario::ScenarioSet scenarios;
  // Filled by the solve criteria, audited by criterion 8.
  std::vector<ccg::ScheduleResult> runs;
  std::vector<fs::path> dispatch_dirs;
};

std::string num(double v) {
  std::ostringstream s;
  s.precision(10);
  s << v;
  return s.str();
}

Outcome budgets(Context&) {
  Outcome o;
  auto t0 = clock_type::now();
  auto b = ambiguity::compute_budgets(5000, 8, 0.99, 0.99);
  double us = std::chrono::duration<double, std::micro>(clock_type::now() - t0).count();
  o.require(std::abs(b.theta1 - 5.9022e-3) <= 1e-7, "theta1 = " + num(b.theta1));
  o.require(std::abs(b.thetainf - 7.3778e-4) <= 1e-8, "thetainf = " + num(b.thetainf));
  o.require(us < 1000.0, "took " + num(us) + " us");
  if (o.pass) o.detail = "theta1=" + num(b.theta1) + " thetainf=" + num(b.thetainf) + " in " + num(us) + " us";
  return o;
}

Outcome oracle_equivalence(Context&) {
  Outcome o;
  std::mt19937_64 rng(2026);
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    auto in = testing::random_instance(rng);
    auto l = ambiguity::worst_case_lp(in.p0, in.f, in.b);
    auto g = ambiguity::worst_case_greedy(in.p0, in.f, in.b);
    worst = std::max(worst, std::abs(l.objective - g.objective));
  }
  o.require(worst <= 1e-8, "max gap " + num(worst));
  if (o.pass) o.detail = "200 instances, max gap " + num(worst);
  return o;
}

Outcome solver_correctness(Context&) {
  Outcome o;
  std::mt19937_64 rng(20260101);
  double lp_gap = 0.0;
  int lp_feasible = 0;
  for (int k = 0; k < 100; ++k) {
    auto p = testing::random_lp(rng);
    auto oracle = testing::vertex_enumeration(p);
    auto s = solver::solve_lp(p);
    if (!oracle.feasible) {
      o.require(s.status == solver::SolveStatus::Infeasible, "LP " + std::to_string(k) + " should be infeasible");
      continue;
    }
    ++lp_feasible;
    o.require(s.optimal(), "LP " + std::to_string(k) + " not optimal");
    if (s.optimal()) lp_gap = std::max(lp_gap, std::abs(s.objective - oracle.objective));
  }
  o.require(lp_gap <= 1e-7, "LP max gap " + num(lp_gap));
  std::mt19937_64 rng2(31337);
  double milp_gap = 0.0;
  int milp_feasible = 0, max_bin = 0;
  for (int k = 0; k < 50; ++k) {
    auto p = testing::random_milp(rng2);
    max_bin = std::max(max_bin, p.num_binaries());
    auto oracle = testing::binary_enumeration(p);
    auto s = solver::solve_milp(p);
    if (!oracle.feasible) {
      o.require(s.status == solver::SolveStatus::Infeasible, "MILP " + std::to_string(k) + " should be infeasible");
      continue;
    }
    ++milp_feasible;
    o.require(s.optimal(), "MILP " + std::to_string(k) + " not optimal");
    if (s.optimal()) milp_gap = std::max(milp_gap, std::abs(s.objective - oracle.objective));
  }
  o.require(milp_gap <= 1e-7, "MILP max gap " + num(milp_gap));
  o.require(max_bin <= 12, "instance with " + std::to_string(max_bin) + " binaries");
  if (o.pass)
    o.detail = "LP 100 (" + std::to_string(lp_feasible) + " feasible) max gap " + num(lp_gap) + "; MILP 50 (" +
               std::to_string(milp_feasible) + " feasible, <= " + std::to_string(max_bin) + " binaries) max gap " +
               num(milp_gap);
  return o;
}

Outcome convergence(Context& ctx) {
  Outcome o;
  auto r = ccg::run(ctx.config, ctx.scenarios, ccg::SolveMode::dro(0.99, 0.99, 5000));
  o.require(r.scenarios.n_s() == 8, "n_s = " + std::to_string(r.scenarios.n_s()));
  o.require(r.converged && r.ub - r.lb <= 0.01, "gap " + num(r.ub - r.lb));
  o.require(r.iterations <= 10, std::to_string(r.iterations) + " iterations");
  double run_min = solver::kInf;
  for (std::size_t k = 0; k < r.trace.size(); ++k) {
    run_min = std::min(run_min, r.trace[k].ub);
    o.require(std::abs(run_min - r.trace[k].ub_best) <= 1e-9, "ub_best is not the running minimum");
    if (k > 0) {
      o.require(r.trace[k].lb >= r.trace[k - 1].lb, "LB decreased at iteration " + std::to_string(k + 1));
      o.require(r.trace[k].ub_best <= r.trace[k - 1].ub_best, "running-min UB increased");
    }
  }
  o.require(r.seconds < 180.0, "took " + num(r.seconds) + " s");
  if (o.pass)
    o.detail = std::to_string(r.iterations) + " iterations, total " + num(r.total) + ", gap " + num(r.ub - r.lb);
  ctx.runs.push_back(std::move(r));
  return o;
}

Outcome degenerate_identity(Context& ctx) {
  Outcome o;
  auto a = ccg::run(ctx.config, ctx.scenarios, ccg::SolveMode::budget(0.0, 0.0));
  auto b = ccg::run(ctx.config, ctx.scenarios, ccg::SolveMode::stochastic());
  o.require(std::abs(a.total - b.total) <= 1e-6, "difference " + num(a.total - b.total));
  if (o.pass) o.detail = "theta=0 " + num(a.total) + " vs stochastic " + num(b.total);
  ctx.runs.push_back(std::move(a));
  ctx.runs.push_back(std::move(b));
  return o;
}

Outcome mode_ordering(Context& ctx) {
  Outcome o;
  auto st = ccg::run(ctx.config, ctx.scenarios, ccg::SolveMode::stochastic());
  auto dr = ccg::run(ctx.config, ctx.scenarios, ccg::SolveMode::dro(0.99, 0.99, 5000));
  auto ro = ccg::run(ctx.config, ctx.scenarios, ccg::SolveMode::robust());
  o.require(st.converged && dr.converged && ro.converged, "a mode did not converge");
  o.require(st.total <= dr.total, "stochastic above DRO");
  o.require(dr.total <= ro.total, "DRO above robust");
  o.require(ro.total - st.total >= 0.01, "outer gap " + num(ro.total - st.total));
  if (o.pass) o.detail = "stochastic " + num(st.total) + " <= DRO " + num(dr.total) + " <= robust " + num(ro.total);
  for (auto* r : {&st, &dr, &ro}) ctx.runs.push_back(std::move(*r));
  return o;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream is(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(is, line)) {
    std::vector<std::string> row;
    for (auto f : io::split_fields(line)) row.emplace_back(f);
    rows.push_back(std::move(row));
  }
  return rows;
}

Outcome sensitivity(Context& ctx) {
  Outcome o;
  const std::string cfg = (ctx.data / "config.json").string(), scen = (ctx.data / "scenarios.json").string();
  std::map<std::string, std::vector<double>> totals;
  for (const std::string axis : {"M", "alpha1", "alphainf", "norm-variant"}) {
    auto dir = ctx.work / ("sweep_" + axis);
    fs::remove_all(dir);
    std::vector<std::string> args = {"ciesdro", "sweep",  "--config", cfg, "--scenarios", scen,
                                     "--axis",  axis,     "--out",    dir.string()};
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    o.require(code == 0, axis + " sweep exit " + std::to_string(code) + ": " + err.str());
    auto rows = read_csv(dir / "sweep.csv");
    for (std::size_t i = 1; i < rows.size(); ++i) {
      o.require(rows[i].size() == 6 && rows[i][5] == "ok", axis + " cell " + rows[i][1] + " failed");
      if (rows[i].size() == 6 && !rows[i][2].empty()) totals[axis].push_back(std::stod(rows[i][2]));
      ctx.dispatch_dirs.push_back(dir / (axis + "_" + rows[i][1]));
    }
  }
  auto monotone = [&](const std::string& axis, int sign, std::size_t n) {
    const auto& v = totals[axis];
    o.require(v.size() == n, axis + ": " + std::to_string(v.size()) + " cells");
    for (std::size_t i = 1; i < v.size(); ++i)
      o.require(sign * (v[i] - v[i - 1]) >= -1e-6, axis + " trend broken at cell " + std::to_string(i));
  };
  monotone("M", -1, 4);
  monotone("alpha1", 1, 3);
  monotone("alphainf", 1, 3);
  const auto& nv = totals["norm-variant"];
  o.require(nv.size() == 3, "norm-variant cells");
  if (nv.size() == 3) {
    o.require(nv[0] <= nv[1] + 1e-6, "comprehensive above 1-norm");
    o.require(nv[0] <= nv[2] + 1e-6, "comprehensive above inf-norm");
  }
  if (o.pass) {
    std::ostringstream s;
    for (const auto& [axis, v] : totals) {
      s << axis << " {";
      for (std::size_t i = 0; i < v.size(); ++i) s << (i ? ", " : "") << num(v[i]);
      s << "} ";
    }
    o.detail = s.str();
  }
  return o;
}

Outcome feasibility_audit(Context& ctx) {
  Outcome o;
  const auto& c = ctx.config;
  int checked = 0;
  auto check = [&](const cies::FirstStageDecision& u, const cies::SecondStageDecision& v, const cies::Availability& a,
                   const std::string& where) {
    ++checked;
    auto issues = cies::audit_dispatch(c, u, v, a, 1e-6);
    o.require(issues.empty(), where + ": " + (issues.empty() ? "" : issues.front()));
  };
  for (std::size_t r = 0; r < ctx.runs.size(); ++r) {
    const auto& run = ctx.runs[r];
    for (int k = 0; k < run.scenarios.n_s(); ++k)
      check(run.u, run.dispatch[k], {run.scenarios.pv[k], run.scenarios.wt[k]},
            "run " + std::to_string(r) + " scenario " + std::to_string(k));
  }
  // Dispatch files from the sweeps, reloaded from disk. The written MTG heat
  // column must equal the heat ratio times the electric output.
  for (const auto& dir : ctx.dispatch_dirs)
    for (int k = 0; fs::exists(dir / io::dispatch_file_name(k)); ++k) {
      auto path = dir / io::dispatch_file_name(k);
      auto d = io::read_dispatch_csv(path);
      check(d.u, d.v, d.a, path.string());
      auto rows = read_csv(path);
      std::size_t pcol = 0, hcol = 0;
      for (std::size_t j = 0; j < rows[0].size(); ++j) {
        if (rows[0][j] == "p_mtg_0") pcol = j;
        if (rows[0][j] == "p_mtg_hl_0") hcol = j;
      }
      for (std::size_t t = 1; t < rows.size(); ++t) {
        double p = std::stod(rows[t][pcol]), h = std::stod(rows[t][hcol]);
        o.require(std::abs(h - c.mtg.heat_ratio * p) <= 1e-9 * std::max(1.0, h), path.string() + ": MTG heat coupling");
      }
    }
  o.require(checked > 0, "no dispatches audited");
  if (o.pass) o.detail = std::to_string(checked) + " dispatches clean";
  return o;
}

Outcome clustering_indices(Context&) {
  Outcome o;
  std::mt19937_64 rng(6);
  double worst = 0.0;
  int cases = 0;
  auto compare = [&](const scenario::SampleMatrix& s, int k, std::uint64_t seed) {
    auto c = scenario::kmeans_cluster(s, k, seed);
    worst = std::max(worst, std::abs(scenario::davies_bouldin(s, c) - testing::brute_dbi(s, c.labels, k)));
    worst = std::max(worst, std::abs(scenario::silhouette(s, c) - testing::brute_sc(s, c.labels, k)));
    ++cases;
  };
  for (int trial = 0; trial < 30; ++trial) {
    int rows = testing::uniform_int(rng, 4, 50);
    auto s = testing::random_samples(rng, rows);
    compare(s, testing::uniform_int(rng, 2, std::min(rows, 6)), trial);
  }
  // First 50 days of the synthetic fixture.
  auto fx = scenario::generate_fixture(42, 50);
  for (int k = 2; k <= 6; ++k) {
    compare(fx.pv, k, 42);
    compare(fx.wt, k, 42);
  }
  o.require(worst <= 1e-10, "max deviation " + num(worst));
  auto full = scenario::generate_fixture(42);
  int k_pv = scenario::select_cluster_count(full.pv, 2, 6, 42).k;
  o.require(k_pv == 2, "PV selected k=" + std::to_string(k_pv));
  if (o.pass) o.detail = std::to_string(cases) + " clusterings, max deviation " + num(worst) + "; PV k=2";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  Context ctx;
  ctx.data = argc > 1 ? fs::path(argv[1]) : fs::path(CIESDRO_DATA_DIR) / "fixture";
  ctx.work = argc > 2 ? fs::path(argv[2]) : fs::temp_directory_path() / "ciesdro_acceptance";
  try {
    ctx.config = cies::read_config((ctx.data / "config.json").string());
    ctx.scenarios = io::read_scenarios(ctx.data / "scenarios.json");
    fs::create_directories(ctx.work);
  } catch (const std::exception& e) {
    std::cerr << "cannot load fixture from " << ctx.data << ": " << e.what() << "\n";
    return 2;
  }

  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome(Context&)> fn;
  };
  const std::vector<Criterion> criteria = {
      {1, "budget formulas", 0.001, budgets},
      {2, "worst-case oracle equivalence", 5, oracle_equivalence},
      {3, "solver correctness", 30, solver_correctness},
      {4, "CCG convergence on fixture", 180, convergence},
      {5, "zero-budget identity", 0, degenerate_identity},
      {6, "mode ordering", 0, mode_ordering},
      {7, "sensitivity trends", 1200, sensitivity},
      {8, "physical feasibility audit", 0, feasibility_audit},
      {9, "clustering indices and PV selection", 0, clustering_indices},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto t0 = clock_type::now();
    Outcome o;
    try {
      o = c.fn(ctx);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    double s = std::chrono::duration<double>(clock_type::now() - t0).count();
    // Criterion 1 times the call itself; the others time the whole check.
    if (c.budget_s > 0 && c.id != 1 && s > c.budget_s) {
      o.pass = false;
      o.detail = "over the " + num(c.budget_s) + " s budget: " + o.detail;
    }
    if (!o.pass) ++failed;
    std::printf("criterion %d %s: %s (%.2f s) %s\n", c.id, c.name, o.pass ? "PASS" : "FAIL", s, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
