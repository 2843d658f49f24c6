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

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <string_view>

#include <sys/wait.h>
#include <unistd.h>

#include "ciesdro/solver/milp.hpp"
#include "ciesdro/solver/problem.hpp"
#include "json.hpp"

namespace ciesdro::solver {

/// A solver behind a uniform LP/MILP contract.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string name() const = 0;
  /// Solves `p` as an LP when it has no binaries, otherwise as a MILP.
  virtual Solution solve(const SparseProblem& p, const MilpOptions& opt) const = 0;
};

class BuiltinBackend final : public Backend {
 public:
  std::string name() const override { return "builtin"; }
  Solution solve(const SparseProblem& p, const MilpOptions& opt) const override {
    return p.num_binaries() == 0 ? solve_lp(p, opt.lp) : solve_milp(p, opt);
  }
};

namespace detail {

inline constexpr std::string_view kScipyDriver = R"PY(
import json, sys
import numpy as np
from scipy.optimize import linprog, milp, LinearConstraint, Bounds
from scipy.sparse import coo_matrix

with open(sys.argv[1]) as fh:
    prob = json.load(fh)
n, m = prob["n"], prob["m"]
cost = np.array(prob["cost"], dtype=float)
inf = float("inf")
lo = np.array([(-inf if v is None else v) for v in prob["lower"]], dtype=float)
up = np.array([(inf if v is None else v) for v in prob["upper"]], dtype=float)
rows, cols, vals = prob["rows"], prob["cols"], prob["vals"]
A = coo_matrix((vals, (rows, cols)), shape=(m, n)).tocsr()
rhs = np.array(prob["rhs"], dtype=float)
sense = prob["sense"]
out = {}
if any(prob["binary"]):
    rl = np.array([rhs[i] if sense[i] != "L" else -inf for i in range(m)])
    ru = np.array([rhs[i] if sense[i] != "G" else inf for i in range(m)])
    cons = [LinearConstraint(A, rl, ru)] if m > 0 else []
    res = milp(cost, constraints=cons, integrality=np.array(prob["binary"]),
               bounds=Bounds(lo, up),
               options={"mip_rel_gap": 0.0, "presolve": True})
    status = {0: "optimal", 1: "iteration-limit", 2: "infeasible", 3: "unbounded"}.get(res.status, "error")
    out = {"status": status, "message": str(res.message)}
    if res.x is not None:
        out["x"] = res.x.tolist()
        out["objective"] = float(res.fun)
else:
    ub_idx = [i for i in range(m) if sense[i] != "E"]
    eq_idx = [i for i in range(m) if sense[i] == "E"]
    sign = np.array([1.0 if sense[i] == "L" else -1.0 for i in ub_idx])
    kw = {}
    if ub_idx:
        kw["A_ub"] = A[ub_idx].multiply(sign[:, None]).tocsr()
        kw["b_ub"] = rhs[ub_idx] * sign
    if eq_idx:
        kw["A_eq"] = A[eq_idx]
        kw["b_eq"] = rhs[eq_idx]
    res = linprog(cost, bounds=list(zip(lo, up)), method="highs", **kw)
    status = {0: "optimal", 1: "iteration-limit", 2: "infeasible", 3: "unbounded"}.get(res.status, "error")
    out = {"status": status, "message": str(res.message)}
    if res.status == 0:
        out["x"] = res.x.tolist()
        out["objective"] = float(res.fun)
        duals = [0.0] * m
        if ub_idx:
            for k, i in enumerate(ub_idx):
                duals[i] = float(res.ineqlin.marginals[k] * sign[k])
        if eq_idx:
            for k, i in enumerate(eq_idx):
                duals[i] = float(res.eqlin.marginals[k])
        out["duals"] = duals
with open(sys.argv[2], "w") as fh:
    json.dump(out, fh)
)PY";

inline std::filesystem::path scratch_path(const std::string& stem) {
  static std::atomic<long> counter{0};
  auto dir = std::filesystem::temp_directory_path();
  return dir / ("ciesdro_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + "_" + stem);
}

/// Runs `cmd` and returns its exit status; stderr is captured into `log`.
inline int run_command(const std::string& cmd, std::string& log) {
  std::string full = cmd + " 2>&1";
  FILE* pipe = ::popen(full.c_str(), "r");
  if (!pipe) return -1;
  char buf[512];
  while (std::fgets(buf, sizeof buf, pipe)) log += buf;
  int rc = ::pclose(pipe);
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace detail

/**
 * Adapter to HiGHS through scipy, run in a python3 subprocess. The problem
 * travels as JSON through scratch files. Failures of any kind raise
 * SolverFailure tagged "scipy".
 */
class ScipyBackend final : public Backend {
 public:
  explicit ScipyBackend(std::string python = "python3") : python_(std::move(python)) {}

  std::string name() const override { return "scipy"; }

  /// True when the interpreter starts and scipy.optimize.milp imports.
  bool available() const {
    std::string log;
    return detail::run_command(python_ + " -c \"from scipy.optimize import milp\"", log) == 0;
  }

  Solution solve(const SparseProblem& p, const MilpOptions& /*opt*/) const override {
    p.validate();
    using nlohmann::json;
    json in;
    in["n"] = p.n_vars();
    in["m"] = p.n_rows();
    in["cost"] = p.cost;
    json lo = json::array(), up = json::array();
    for (int j = 0; j < p.n_vars(); ++j) {
      lo.push_back(std::isfinite(p.lower[j]) ? json(p.lower[j]) : json(nullptr));
      up.push_back(std::isfinite(p.upper[j]) ? json(p.upper[j]) : json(nullptr));
    }
    in["lower"] = lo;
    in["upper"] = up;
    std::vector<int> binary(p.binary.begin(), p.binary.end());
    in["binary"] = binary;
    std::vector<int> rows, cols;
    std::vector<double> vals;
    for (const auto& t : p.entries) {
      rows.push_back(t.row);
      cols.push_back(t.col);
      vals.push_back(t.value);
    }
    in["rows"] = rows;
    in["cols"] = cols;
    in["vals"] = vals;
    in["rhs"] = p.rhs;
    std::string sense;
    for (auto s : p.sense) sense += s == RowSense::LessEqual ? 'L' : s == RowSense::Equal ? 'E' : 'G';
    json senses = json::array();
    for (char c : sense) senses.push_back(std::string(1, c));
    in["sense"] = senses;

    auto script = detail::scratch_path("driver.py");
    auto in_path = detail::scratch_path("in.json");
    auto out_path = detail::scratch_path("out.json");
    struct Cleanup {
      std::vector<std::filesystem::path> paths;
      ~Cleanup() {
        std::error_code ec;
        for (auto& q : paths) std::filesystem::remove(q, ec);
      }
    } cleanup{{script, in_path, out_path}};
    std::ofstream(script) << detail::kScipyDriver;
    std::ofstream(in_path) << in.dump();

    std::string log;
    int rc = detail::run_command(python_ + " " + script.string() + " " + in_path.string() + " " +
                                     out_path.string(),
                                 log);
    if (rc != 0) throw SolverFailure("scipy", "driver exited with status " + std::to_string(rc) + ": " + log);
    std::ifstream is(out_path);
    if (!is) throw SolverFailure("scipy", "driver produced no result");
    json out;
    try {
      is >> out;
    } catch (const std::exception& e) {
      throw SolverFailure("scipy", std::string("unreadable result: ") + e.what());
    }
    Solution sol;
    std::string st = out.value("status", "error");
    if (st == "optimal") sol.status = SolveStatus::Optimal;
    else if (st == "infeasible") sol.status = SolveStatus::Infeasible;
    else if (st == "unbounded") sol.status = SolveStatus::Unbounded;
    else if (st == "iteration-limit") sol.status = SolveStatus::IterationLimit;
    else throw SolverFailure("scipy", "solver error: " + out.value("message", std::string("unknown")));
    if (out.contains("x")) {
      sol.values = out["x"].get<std::vector<double>>();
      sol.objective = out["objective"].get<double>() + p.objective_offset;
      sol.bound = sol.objective;
    }
    if (out.contains("duals")) sol.row_duals = out["duals"].get<std::vector<double>>();
    return sol;
  }

 private:
  std::string python_;
};

/// "" or "builtin" selects the built-in solver; "scipy" the adapter.
inline std::shared_ptr<const Backend> make_backend(std::string_view name) {
  if (name.empty() || name == "builtin") return std::make_shared<BuiltinBackend>();
  if (name == "scipy") return std::make_shared<ScipyBackend>();
  throw std::invalid_argument("unknown solver backend: " + std::string(name));
}

}  // namespace ciesdro::solver
