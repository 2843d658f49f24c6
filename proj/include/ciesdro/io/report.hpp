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

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "ciesdro/ccg/ccg.hpp"
#include "ciesdro/io/csv.hpp"
#include "json.hpp"

namespace ciesdro::io {

using nlohmann::json;

/// Settings echoed into the report next to the result.
struct RunSettings {
  double tol = 0.01;
  int max_iter = 25;
  std::string solver = "builtin";
  std::string scenarios_path;
  std::string config_path;
};

inline json cost_json(const cies::CostBreakdown& b) {
  return {{"c_startstop", b.c_startstop}, {"c_mtg", b.c_mtg},   {"c_buy", b.c_buy},
          {"c_sell_profit", b.c_sell_profit}, {"c_ess", b.c_ess}, {"c_hsd", b.c_hsd},
          {"c_loss", b.c_loss},           {"c_co2", b.c_co2},   {"c_idr", b.c_idr},
          {"total", b.total}};
}

/// p-weighted breakdown. Start/stop cost is scenario independent, so the
/// weighted total equals the worst-case objective when p sums to one.
inline cies::CostBreakdown weighted_costs(const std::vector<cies::CostBreakdown>& costs,
                                          const std::vector<double>& p) {
  cies::CostBreakdown w;
  for (std::size_t k = 0; k < costs.size(); ++k) {
    const auto& b = costs[k];
    w.c_startstop += p[k] * b.c_startstop;
    w.c_mtg += p[k] * b.c_mtg;
    w.c_buy += p[k] * b.c_buy;
    w.c_sell_profit += p[k] * b.c_sell_profit;
    w.c_ess += p[k] * b.c_ess;
    w.c_hsd += p[k] * b.c_hsd;
    w.c_loss += p[k] * b.c_loss;
    w.c_co2 += p[k] * b.c_co2;
    w.c_idr += p[k] * b.c_idr;
    w.total += p[k] * b.total;
  }
  return w;
}

inline json first_stage_json(const cies::FirstStageDecision& u) {
  auto per_unit = [&](const std::vector<int>& v) {
    json a = json::array();
    for (int i = 0; i < u.G; ++i) a.push_back(std::vector<int>(v.begin() + i * u.T, v.begin() + (i + 1) * u.T));
    return a;
  };
  return {{"xi", per_unit(u.xi)}, {"y", per_unit(u.y)},   {"z", per_unit(u.z)},         {"bch", u.bch},
          {"bdc", u.bdc},         {"betach", u.betach}, {"betadc", u.betadc}};
}

inline json trace_json(const std::vector<ccg::IterationRecord>& trace) {
  json a = json::array();
  for (const auto& r : trace)
    a.push_back({{"iteration", r.iteration},
                 {"lb", r.lb},
                 {"ub", r.ub},
                 {"ub_best", r.ub_best},
                 {"gap", r.gap},
                 {"master_objective", r.master_objective},
                 {"first_stage_cost", r.first_stage_cost},
                 {"master_status", r.master_status},
                 {"master_nodes", r.master_nodes},
                 {"master_vars", r.master_vars},
                 {"master_rows", r.master_rows},
                 {"p", r.p},
                 {"f", r.f},
                 {"seconds", r.seconds}});
  return a;
}

inline std::string dispatch_file_name(int k) { return "dispatch_s" + std::to_string(k) + ".csv"; }

inline json report_json(const cies::CiesConfig& c, const ccg::ScheduleResult& r, const RunSettings& set) {
  const char* norm = r.mode.norm == ccg::SolveMode::Norm::Both      ? "both"
                     : r.mode.norm == ccg::SolveMode::Norm::OneOnly ? "1-norm"
                                                                    : "inf-norm";
  json costs = json::array();
  for (std::size_t k = 0; k < r.costs.size(); ++k) {
    auto j = cost_json(r.costs[k]);
    j["scenario"] = k;
    costs.push_back(j);
  }
  json files = json::array();
  for (int k = 0; k < r.scenarios.n_s(); ++k) files.push_back(dispatch_file_name(k));
  return {
      {"mode", r.mode.name()},
      {"converged", r.converged},
      {"iterations", r.iterations},
      {"total", r.total},
      {"lb", r.lb},
      {"ub", r.ub},
      {"gap", r.ub - r.lb},
      {"curtailment_rate", r.curtailment_rate},
      {"seconds", r.seconds},
      {"budgets",
       {{"theta1", r.budget.theta1},
        {"thetainf", r.budget.thetainf},
        {"alpha1", r.mode.alpha1},
        {"alphainf", r.mode.alphainf},
        {"m_hist", r.mode.m_hist},
        {"n_s", r.budget.n_s},
        {"norm", norm},
        {"box", r.mode.box}}},
      {"settings",
       {{"tol", set.tol},
        {"max_iter", set.max_iter},
        {"solver", set.solver},
        {"scenarios", set.scenarios_path},
        {"config", set.config_path}}},
      {"trace", trace_json(r.trace)},
      {"first_stage", first_stage_json(r.u)},
      {"first_stage_cost", cies::first_stage_cost(c, r.u)},
      {"scenarios", {{"n_s", r.scenarios.n_s()}, {"p0", r.scenarios.p0}}},
      {"p_star", r.p_star},
      {"f", r.f},
      {"costs", costs},
      {"expected_costs", cost_json(weighted_costs(r.costs, r.p_star))},
      {"dispatch_files", files},
  };
}

/// One row per period. Commitment and availability columns are included so
/// the file can be audited on its own.
inline std::string dispatch_csv(const cies::CiesConfig& c, const cies::FirstStageDecision& u,
                                const cies::SecondStageDecision& v, const cies::Availability& a) {
  std::vector<std::string> head = {"t"};
  for (int i = 0; i < u.G; ++i)
    for (const char* n : {"xi", "y", "z"}) head.push_back(std::string(n) + "_" + std::to_string(i));
  for (const char* n : {"bch", "bdc", "betach", "betadc", "pv_avail", "wt_avail"}) head.push_back(n);
  for (int i = 0; i < v.G; ++i) head.push_back("p_mtg_" + std::to_string(i));
  for (int i = 0; i < v.G; ++i) head.push_back("p_mtg_hl_" + std::to_string(i));
  for (const char* n : cies::SecondStageLayout::kNames) head.push_back(n);
  for (const char* n : {"load", "h_load", "c_ess", "elec_residual", "heat_residual"}) head.push_back(n);
  CsvTable tab(head);
  for (int t = 0; t < v.T; ++t) {
    std::vector<std::string> row = {std::to_string(t)};
    for (int i = 0; i < u.G; ++i)
      for (const auto* g : {&u.xi, &u.y, &u.z}) row.push_back(std::to_string((*g)[i * u.T + t]));
    for (const auto* g : {&u.bch, &u.bdc, &u.betach, &u.betadc}) row.push_back(std::to_string((*g)[t]));
    row.push_back(format_number(a.pv[t]));
    row.push_back(format_number(a.wt[t]));
    for (int i = 0; i < v.G; ++i) row.push_back(format_number(v.p_mtg[i * v.T + t]));
    for (int i = 0; i < v.G; ++i) row.push_back(format_number(v.mtg_heat(c, i, t)));
    for (int g = 0; g < cies::SecondStageLayout::kGroupCount; ++g)
      row.push_back(format_number((*v.group(static_cast<cies::SecondStageLayout::Group>(g)))[t]));
    row.push_back(format_number(v.load(c, t)));
    row.push_back(format_number(v.heat_load(c, t)));
    row.push_back(format_number(v.ess_state(c, t)));
    row.push_back(format_number(v.electric_residual(c, t)));
    row.push_back(format_number(v.heat_residual(c, t)));
    tab.add_row(row);
  }
  return tab.str();
}

/// A dispatch file read back: plan, recourse and availability.
struct DispatchRecord {
  cies::FirstStageDecision u;
  cies::SecondStageDecision v;
  cies::Availability a;
};

/// Inverse of dispatch_csv. Derived columns are ignored; audit recomputes
/// them.
inline DispatchRecord parse_dispatch_csv(std::istream& is) {
  std::string line;
  long lineno = 1;
  if (!std::getline(is, line)) throw InputError("empty dispatch file");
  auto head = split_fields(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < head.size(); ++i) col[std::string(head[i])] = i;
  int G = 0;
  while (col.count("p_mtg_" + std::to_string(G))) ++G;
  if (G == 0) throw InputError("dispatch file: no p_mtg_0 column", 1);
  auto need = [&](const std::string& n) {
    auto it = col.find(n);
    if (it == col.end()) throw InputError("dispatch file: missing column " + n, 1);
    return it->second;
  };
  std::vector<std::vector<double>> rows;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    auto f = split_fields(line);
    if (f.size() != head.size())
      throw InputError("expected " + std::to_string(head.size()) + " fields, found " + std::to_string(f.size()),
                       lineno);
    std::vector<double> r;
    for (auto s : f) r.push_back(parse_number(s, lineno));
    rows.push_back(std::move(r));
  }
  const int T = static_cast<int>(rows.size());
  if (T == 0) throw InputError("dispatch file has no data rows");
  DispatchRecord d;
  auto& u = d.u;
  u.T = d.v.T = T;
  u.G = d.v.G = G;
  u.xi.assign(G * T, 0);
  u.y = u.z = u.xi;
  d.v.p_mtg.assign(G * T, 0.0);
  auto bit = [](double x) { return x > 0.5 ? 1 : 0; };
  for (int i = 0; i < G; ++i) {
    auto cx = need("xi_" + std::to_string(i)), cy = need("y_" + std::to_string(i)),
         cz = need("z_" + std::to_string(i)), cp = need("p_mtg_" + std::to_string(i));
    for (int t = 0; t < T; ++t) {
      u.xi[i * T + t] = bit(rows[t][cx]);
      u.y[i * T + t] = bit(rows[t][cy]);
      u.z[i * T + t] = bit(rows[t][cz]);
      d.v.p_mtg[i * T + t] = rows[t][cp];
    }
  }
  auto column = [&](const std::string& n) {
    auto c = need(n);
    std::vector<double> out(T);
    for (int t = 0; t < T; ++t) out[t] = rows[t][c];
    return out;
  };
  auto bits = [&](const std::string& n) {
    std::vector<int> out;
    for (double x : column(n)) out.push_back(bit(x));
    return out;
  };
  u.bch = bits("bch");
  u.bdc = bits("bdc");
  u.betach = bits("betach");
  u.betadc = bits("betadc");
  d.a.pv = column("pv_avail");
  d.a.wt = column("wt_avail");
  for (int g = 0; g < cies::SecondStageLayout::kGroupCount; ++g)
    *d.v.group(static_cast<cies::SecondStageLayout::Group>(g)) = column(cies::SecondStageLayout::kNames[g]);
  return d;
}

inline DispatchRecord read_dispatch_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw InputError("cannot open " + path.string());
  return parse_dispatch_csv(is);
}

inline std::string costs_csv(const ccg::ScheduleResult& r) {
  CsvTable tab({"scenario", "p0", "p_star", "c_startstop", "c_mtg", "c_buy", "c_sell_profit", "c_ess", "c_hsd",
                "c_loss", "c_co2", "c_idr", "total"});
  auto add = [&](const std::string& name, double p0, double ps, const cies::CostBreakdown& b) {
    tab.add_row({name, format_number(p0), format_number(ps), format_number(b.c_startstop), format_number(b.c_mtg),
                 format_number(b.c_buy), format_number(b.c_sell_profit), format_number(b.c_ess),
                 format_number(b.c_hsd), format_number(b.c_loss), format_number(b.c_co2), format_number(b.c_idr),
                 format_number(b.total)});
  };
  for (std::size_t k = 0; k < r.costs.size(); ++k)
    add(std::to_string(k), r.scenarios.p0[k], r.p_star[k], r.costs[k]);
  add("worst_case", 1.0, 1.0, weighted_costs(r.costs, r.p_star));
  return tab.str();
}

inline std::string trace_csv(const std::vector<ccg::IterationRecord>& trace) {
  CsvTable tab({"iter", "lb", "ub", "ub_best", "gap", "seconds"});
  for (const auto& r : trace)
    tab.add_row({std::to_string(r.iteration), format_number(r.lb), format_number(r.ub), format_number(r.ub_best),
                 format_number(r.gap), format_number(r.seconds)});
  return tab.str();
}

/// Writes report.json, trace.csv, costs.csv and one dispatch file per
/// scenario into `dir`.
inline void write_run_outputs(const std::filesystem::path& dir, const cies::CiesConfig& c,
                              const ccg::ScheduleResult& r, const RunSettings& set) {
  std::filesystem::create_directories(dir);
  for (int k = 0; k < r.scenarios.n_s(); ++k)
    write_file_atomic(dir / dispatch_file_name(k),
                      dispatch_csv(c, r.u, r.dispatch[k], {r.scenarios.pv[k], r.scenarios.wt[k]}));
  write_file_atomic(dir / "costs.csv", costs_csv(r));
  write_file_atomic(dir / "trace.csv", trace_csv(r.trace));
  write_file_atomic(dir / "report.json", report_json(c, r, set).dump(2) + "\n");
}

/// One sweep cell. `status` is "ok", "not-converged", "infeasible" or
/// "error".
struct SweepCell {
  std::string value;
  double total = 0.0;
  double curtailment_rate = 0.0;
  int iterations = 0;
  std::string status = "ok";
  std::string message;
};

inline std::string sweep_csv(const std::string& axis, const std::vector<SweepCell>& cells) {
  CsvTable tab({"axis", "value", "total_cost", "curtailment_rate", "iterations", "status"});
  for (const auto& c : cells) {
    bool failed = c.status == "infeasible" || c.status == "error";
    tab.add_row({axis, c.value, failed ? "" : format_number(c.total), failed ? "" : format_number(c.curtailment_rate),
                 std::to_string(c.iterations), c.status});
  }
  return tab.str();
}

}  // namespace ciesdro::io
