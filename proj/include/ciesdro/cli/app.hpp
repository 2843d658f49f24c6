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
#include <filesystem>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "ciesdro/ccg/ccg.hpp"
#include "ciesdro/io/report.hpp"
#include "ciesdro/io/scenario_json.hpp"
#include "ciesdro/scenario/fixture.hpp"

namespace ciesdro::cli {

namespace fs = std::filesystem;

enum ExitCode : int { kOk = 0, kInputError = 2, kInfeasible = 3, kNotConverged = 4 };

/// Flags shared by the commands. Field names follow the long options.
struct Manifest {
  std::string config;
  std::string scenarios;
  std::string pv;
  std::string wt;
  int k_max = 6;
  std::string mode = "dro";
  double alpha1 = 0.99;
  double alphainf = 0.99;
  long m_hist = 5000;
  double tol = 0.01;
  int max_iter = 25;
  std::uint64_t seed = 42;
  std::string out = "out";
  int parallel = 1;
  double box = 0.0;
  std::string solver = "builtin";
  bool quiet = false;
};

inline cies::CiesConfig load_config(const Manifest& m) {
  if (m.config.empty()) return cies::CiesConfig::defaults();
  try {
    return cies::read_config(m.config);
  } catch (const std::invalid_argument& e) {
    throw io::InputError(e.what());
  }
}

struct Reduced {
  scenario::ScenarioSet set;
  nlohmann::json meta;
};

inline Reduced reduce_samples(const std::string& pv_path, const std::string& wt_path, int k_max,
                              std::uint64_t seed) {
  auto pv = io::read_samples_csv(pv_path, scenario::SourceTag::PV);
  auto wt = io::read_samples_csv(wt_path, scenario::SourceTag::WT);
  if (k_max < 2) throw io::InputError("--k-max must be at least 2");
  auto run_one = [&](const scenario::SampleMatrix& s) {
    return scenario::select_cluster_count(s, 2, std::min(k_max, s.rows), seed);
  };
  auto sp = run_one(pv);
  auto sw = run_one(wt);
  Reduced r;
  r.set = scenario::build_scenario_set(sp.clustering, sw.clustering);
  r.meta = {{"source", "reduce"},
            {"seed", seed},
            {"k_max", k_max},
            {"pv", {{"path", pv_path}, {"rows", pv.rows}, {"k", sp.k}, {"indices", io::index_table_json(sp.table)}}},
            {"wt", {{"path", wt_path}, {"rows", wt.rows}, {"k", sw.k}, {"indices", io::index_table_json(sw.table)}}}};
  return r;
}

inline scenario::ScenarioSet load_scenarios(const Manifest& m) {
  if (!m.scenarios.empty()) return io::read_scenarios(m.scenarios);
  if (!m.pv.empty() && !m.wt.empty()) return reduce_samples(m.pv, m.wt, m.k_max, m.seed).set;
  throw io::InputError("need --scenarios, or both --pv and --wt");
}

inline ccg::SolveMode parse_mode(const Manifest& m) {
  auto check_alpha = [](double a, const char* n) {
    if (!(a > 0.0 && a < 1.0)) throw io::InputError(std::string(n) + " must lie in (0,1)");
  };
  if (m.mode == "dro") {
    check_alpha(m.alpha1, "--alpha1");
    check_alpha(m.alphainf, "--alphainf");
    if (m.m_hist < 1) throw io::InputError("--m-hist must be at least 1");
    return ccg::SolveMode::dro(m.alpha1, m.alphainf, m.m_hist);
  }
  if (m.mode == "stochastic") return ccg::SolveMode::stochastic();
  if (m.mode == "robust") return ccg::SolveMode::robust();
  if (m.mode == "deterministic") {
    if (!(m.box >= 0.0 && m.box < 1.0)) throw io::InputError("--box must lie in [0,1)");
    return ccg::SolveMode::deterministic(m.box);
  }
  throw io::InputError("unknown mode '" + m.mode + "'");
}

inline std::shared_ptr<const solver::Backend> make_backend(const std::string& name) {
  if (name == "builtin") return std::make_shared<solver::BuiltinBackend>();
  if (name == "scipy") {
    auto b = std::make_shared<solver::ScipyBackend>();
    if (!b->available()) throw io::InputError("scipy backend requested but python3/scipy is not usable");
    return b;
  }
  throw io::InputError("unknown solver '" + name + "'");
}

inline ccg::RunOptions run_options(const Manifest& m) {
  if (!(m.tol > 0.0)) throw io::InputError("--tol must be positive");
  if (m.max_iter < 1) throw io::InputError("--max-iter must be at least 1");
  if (m.parallel < 1) throw io::InputError("--parallel must be at least 1");
  ccg::RunOptions o;
  o.tol = m.tol;
  o.max_iter = m.max_iter;
  o.backend = make_backend(m.solver);
  return o;
}

inline io::RunSettings settings(const Manifest& m) {
  return {m.tol, m.max_iter, m.solver, m.scenarios, m.config};
}

inline int cmd_fixture(const Manifest& m, std::ostream& out) {
  auto fx = scenario::generate_fixture(m.seed);
  fs::create_directories(m.out);
  std::ostringstream pv, wt;
  io::write_samples_csv(pv, fx.pv);
  io::write_samples_csv(wt, fx.wt);
  io::write_file_atomic(fs::path(m.out) / "pv_samples.csv", pv.str());
  io::write_file_atomic(fs::path(m.out) / "wt_samples.csv", wt.str());
  auto c = cies::CiesConfig::defaults();
  io::CsvTable prof({"t", "base_eload", "t_out", "buy_price", "sell_price"});
  for (int t = 0; t < c.horizon; ++t)
    prof.add_row({std::to_string(t), io::format_number(c.profiles.base_eload[t]),
                  io::format_number(c.profiles.t_out[t]), io::format_number(c.grid.buy_price[t]),
                  io::format_number(c.grid.sell_price[t])});
  io::write_file_atomic(fs::path(m.out) / "profiles.csv", prof.str());
  io::write_file_atomic(fs::path(m.out) / "config.json", cies::config_to_json(c).dump(2) + "\n");
  out << "wrote " << fx.pv.rows << " PV and " << fx.wt.rows << " WT days to " << m.out << "\n";
  return kOk;
}

inline int cmd_reduce(const Manifest& m, std::ostream& out) {
  if (m.pv.empty() || m.wt.empty()) throw io::InputError("reduce needs --pv and --wt");
  auto r = reduce_samples(m.pv, m.wt, m.k_max, m.seed);
  fs::create_directories(m.out);
  io::write_file_atomic(fs::path(m.out) / "scenarios.json", io::scenario_json(r.set, r.meta).dump(2) + "\n");
  io::CsvTable tab({"source", "k", "dbi", "sc", "selected"});
  for (const char* src : {"pv", "wt"})
    for (const auto& row : r.meta[src]["indices"]) {
      int k = row["k"];
      tab.add_row({src, std::to_string(k), io::format_number(row["dbi"]), io::format_number(row["sc"]),
                   k == r.meta[src]["k"].get<int>() ? "1" : "0"});
    }
  io::write_file_atomic(fs::path(m.out) / "cluster_indices.csv", tab.str());
  out << "k_pv=" << r.meta["pv"]["k"] << " k_wt=" << r.meta["wt"]["k"] << " n_s=" << r.set.n_s() << "\n";
  return kOk;
}

inline int cmd_run(const Manifest& m, std::ostream& out) {
  // Everything is parsed before the first output is written.
  auto c = load_config(m);
  auto s = load_scenarios(m);
  auto mode = parse_mode(m);
  auto opt = run_options(m);
  opt.threads = m.parallel;
  if (!m.quiet) {
    out << "iter,LB,UB,gap\n";
    opt.on_iteration = [&out](const ccg::IterationRecord& r) {
      out << r.iteration << ',' << io::format_number(r.lb) << ',' << io::format_number(r.ub_best) << ','
          << io::format_number(r.gap) << std::endl;
    };
  }
  auto r = ccg::run(c, s, mode, opt);
  io::write_run_outputs(m.out, c, r, settings(m));
  out << "mode=" << r.mode.name() << " total=" << io::format_number(r.total)
      << " iterations=" << r.iterations << " converged=" << (r.converged ? "yes" : "no")
      << " curtailment=" << io::format_number(r.curtailment_rate) << "% out=" << m.out << "\n";
  return r.converged ? kOk : kNotConverged;
}

/// Default values per axis when none are given.
inline std::vector<std::string> default_axis_values(const std::string& axis) {
  if (axis == "M") return {"100", "1000", "5000", "20000"};
  if (axis == "alpha1" || axis == "alphainf") return {"0.5", "0.8", "0.99"};
  if (axis == "norm-variant") return {"comprehensive", "1-norm", "inf-norm"};
  throw io::InputError("unknown sweep axis '" + axis + "'");
}

/// Mode for one sweep cell: the manifest's DRO settings with one axis moved.
inline ccg::SolveMode sweep_mode(Manifest m, const std::string& axis, const std::string& value) {
  m.mode = "dro";
  auto number = [&] {
    try {
      std::size_t used = 0;
      double v = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
      return v;
    } catch (const std::exception&) {
      throw io::InputError("bad value '" + value + "' for axis " + axis);
    }
  };
  if (axis == "M") {
    double v = number();
    if (v != std::floor(v)) throw io::InputError("M must be an integer");
    m.m_hist = static_cast<long>(v);
  } else if (axis == "alpha1") {
    m.alpha1 = number();
  } else if (axis == "alphainf") {
    m.alphainf = number();
  } else if (axis == "norm-variant") {
    auto base = parse_mode(m);
    if (value == "comprehensive") return base;
    if (value == "1-norm") return ccg::SolveMode::dro(base.alpha1, base.alphainf, base.m_hist, ccg::SolveMode::Norm::OneOnly);
    if (value == "inf-norm") return ccg::SolveMode::dro(base.alpha1, base.alphainf, base.m_hist, ccg::SolveMode::Norm::InfOnly);
    throw io::InputError("norm-variant values are comprehensive, 1-norm, inf-norm");
  } else {
    throw io::InputError("unknown sweep axis '" + axis + "'");
  }
  return parse_mode(m);
}

inline int cmd_sweep(const Manifest& m, const std::string& axis, std::vector<std::string> values,
                     std::ostream& out) {
  auto c = load_config(m);
  auto s = load_scenarios(m);
  if (values.empty()) values = default_axis_values(axis);
  std::vector<ccg::SolveMode> modes;
  for (const auto& v : values) modes.push_back(sweep_mode(m, axis, v));
  auto opt = run_options(m);
  fs::create_directories(m.out);

  std::vector<io::SweepCell> cells(values.size());
  std::mutex log_mu;
  auto work = [&](std::size_t i) {
    auto& cell = cells[i];
    cell.value = values[i];
    try {
      auto r = ccg::run(c, s, modes[i], opt);
      io::write_run_outputs(fs::path(m.out) / (axis + "_" + values[i]), c, r, settings(m));
      cell.total = r.total;
      cell.curtailment_rate = r.curtailment_rate;
      cell.iterations = r.iterations;
      cell.status = r.converged ? "ok" : "not-converged";
    } catch (const ccg::InfeasibleError& e) {
      cell.status = "infeasible";
      cell.message = e.what();
    } catch (const std::exception& e) {
      cell.status = "error";
      cell.message = e.what();
    }
    std::lock_guard<std::mutex> lock(log_mu);
    out << axis << '=' << cell.value << ' ' << cell.status;
    if (cell.status == "ok" || cell.status == "not-converged")
      out << " total=" << io::format_number(cell.total) << " iterations=" << cell.iterations;
    else
      out << ": " << cell.message;
    out << std::endl;
  };
  const int workers = std::max(1, std::min<int>(m.parallel, static_cast<int>(values.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < values.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < values.size(); i = next++) work(i);
      });
    for (auto& t : pool) t.join();
  }
  io::write_file_atomic(fs::path(m.out) / "sweep.csv", io::sweep_csv(axis, cells));

  int code = kOk;
  for (const auto& cell : cells) {
    if (cell.status == "infeasible" || cell.status == "error") code = kInfeasible;
    else if (cell.status == "not-converged" && code == kOk) code = kNotConverged;
  }
  return code;
}

/// Re-validates dispatch files. Directories are scanned for dispatch_s*.csv.
inline int cmd_audit(const Manifest& m, const std::vector<std::string>& targets, double tol, std::ostream& out) {
  auto c = load_config(m);
  std::vector<fs::path> files;
  for (const auto& t : targets) {
    if (fs::is_directory(t)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(t)) {
        auto n = e.path().filename().string();
        if (n.rfind("dispatch_s", 0) == 0 && e.path().extension() == ".csv") found.push_back(e.path());
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else if (fs::exists(t)) {
      files.emplace_back(t);
    } else {
      throw io::InputError("no such file or directory: " + t);
    }
  }
  if (files.empty()) throw io::InputError("audit: no dispatch files found");
  int bad = 0;
  for (const auto& f : files) {
    auto d = io::read_dispatch_csv(f);
    if (d.v.T != c.horizon || d.v.G != c.mtg.count)
      throw io::InputError(f.string() + ": shape does not match the config");
    auto issues = cies::audit_dispatch(c, d.u, d.v, d.a, tol);
    out << f.string() << ": " << (issues.empty() ? "ok" : std::to_string(issues.size()) + " violation(s)") << "\n";
    for (const auto& i : issues) out << "  " << i << "\n";
    if (!issues.empty()) ++bad;
  }
  return bad == 0 ? kOk : kInfeasible;
}

/// Entry point shared by the binary and the tests.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Two-stage distributionally robust scheduling of a community integrated energy system"};
  app.require_subcommand(1);
  Manifest m;
  std::string axis;
  std::vector<std::string> values;
  std::vector<std::string> targets;
  double audit_tol = 1e-6;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", m.config, "CiesConfig JSON (defaults when omitted)");
    sub->add_option("--out", m.out, "Output directory");
    sub->add_option("--seed", m.seed, "Random seed");
  };
  auto add_solve = [&](CLI::App* sub) {
    sub->add_option("--scenarios", m.scenarios, "Scenario JSON");
    sub->add_option("--pv", m.pv, "PV sample CSV (reduced on the fly when --scenarios is absent)");
    sub->add_option("--wt", m.wt, "WT sample CSV");
    sub->add_option("--k-max", m.k_max, "Largest cluster count tried");
    sub->add_option("--mode", m.mode, "dro|stochastic|robust|deterministic");
    sub->add_option("--alpha1", m.alpha1, "1-norm confidence level");
    sub->add_option("--alphainf", m.alphainf, "inf-norm confidence level");
    sub->add_option("--m-hist", m.m_hist, "Historical sample count M");
    sub->add_option("--tol", m.tol, "Absolute UB-LB tolerance");
    sub->add_option("--max-iter", m.max_iter, "Iteration cap");
    sub->add_option("--parallel", m.parallel, "Worker threads");
    sub->add_option("--box", m.box, "Deterministic mode: scale the mean scenario by 1-box");
    sub->add_option("--solver", m.solver, "builtin|scipy");
    sub->add_flag("--quiet", m.quiet, "No per-iteration log");
  };

  auto* fixture = app.add_subcommand("fixture", "Write the synthetic sample dataset");
  add_common(fixture);
  auto* reduce = app.add_subcommand("reduce", "Cluster samples into a scenario file");
  add_common(reduce);
  reduce->add_option("--pv", m.pv, "PV sample CSV")->required();
  reduce->add_option("--wt", m.wt, "WT sample CSV")->required();
  reduce->add_option("--k-max", m.k_max, "Largest cluster count tried");
  auto* run = app.add_subcommand("run", "Solve one schedule");
  add_common(run);
  add_solve(run);
  auto* sweep = app.add_subcommand("sweep", "One run per value of a parameter");
  add_common(sweep);
  add_solve(sweep);
  sweep->add_option("--axis", axis, "M|alpha1|alphainf|norm-variant")->required();
  sweep->add_option("--values", values, "Axis values (defaults per axis)")->delimiter(',');
  auto* audit = app.add_subcommand("audit", "Re-check dispatch CSVs against the model constraints");
  audit->add_option("--config", m.config, "CiesConfig JSON (defaults when omitted)");
  audit->add_option("--tol", audit_tol, "Residual tolerance");
  audit->add_option("targets", targets, "Dispatch files or run directories")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  try {
    if (*fixture) return cmd_fixture(m, out);
    if (*reduce) return cmd_reduce(m, out);
    if (*run) return cmd_run(m, out);
    if (*sweep) return cmd_sweep(m, axis, values, out);
    if (*audit) return cmd_audit(m, targets, audit_tol, out);
  } catch (const ccg::InfeasibleError& e) {
    err << "infeasible: " << e.what() << "\n";
    for (const auto& f : e.families()) err << "  violated family: " << f << "\n";
    return kInfeasible;
  } catch (const io::InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace ciesdro::cli
