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

#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ciesdro/cies/comfort.hpp"
#include "ciesdro/cies/config.hpp"
#include "ciesdro/cies/layout.hpp"
#include "ciesdro/solver/problem.hpp"

namespace ciesdro::cies {

/// Hourly renewable availability for one scenario, kW.
struct Availability {
  std::vector<double> pv;
  std::vector<double> wt;
};

/// Commitment problem: binaries, start/stop costs and the logic rows.
/// Branching priority 1 on ξ, y, z and 0 on the storage flags.
inline solver::SparseProblem build_first_stage(const CiesConfig& c) {
  using solver::RowSense;
  const FirstStageLayout L(c);
  solver::SparseProblem p;
  const int T = L.T;
  for (int i = 0; i < L.G; ++i)
    for (int t = 0; t < T; ++t) p.add_binary(0.0, "xi_" + std::to_string(i) + "_" + std::to_string(t), 1);
  for (int i = 0; i < L.G; ++i)
    for (int t = 0; t < T; ++t)
      p.add_binary(c.mtg.startup_cost, "y_" + std::to_string(i) + "_" + std::to_string(t), 1);
  for (int i = 0; i < L.G; ++i)
    for (int t = 0; t < T; ++t)
      p.add_binary(c.mtg.shutdown_cost, "z_" + std::to_string(i) + "_" + std::to_string(t), 1);
  for (const char* g : {"b_ch_", "b_dc_", "beta_ch_", "beta_dc_"})
    for (int t = 0; t < T; ++t) p.add_binary(0.0, g + std::to_string(t), 0);

  const double init = c.mtg.initial_status ? 1.0 : 0.0;
  for (int i = 0; i < L.G; ++i)
    for (int t = 0; t < T; ++t) {
      std::string tag = std::to_string(i) + "_" + std::to_string(t);
      p.add_row({{L.y(i, t), 1.0}, {L.z(i, t), 1.0}}, RowSense::LessEqual, 1.0, "startstop_" + tag);
      if (t == 0)
        p.add_row({{L.xi(i, 0), 1.0}, {L.y(i, 0), -1.0}, {L.z(i, 0), 1.0}}, RowSense::Equal, init, "link_" + tag);
      else
        p.add_row({{L.xi(i, t), 1.0}, {L.xi(i, t - 1), -1.0}, {L.y(i, t), -1.0}, {L.z(i, t), 1.0}},
                  RowSense::Equal, 0.0, "link_" + tag);
    }
  for (int t = 0; t < T; ++t) {
    p.add_row({{L.bch(t), 1.0}, {L.bdc(t), 1.0}}, RowSense::LessEqual, 1.0, "ess_mode_" + std::to_string(t));
    p.add_row({{L.betach(t), 1.0}, {L.betadc(t), 1.0}}, RowSense::LessEqual, 1.0, "hsd_mode_" + std::to_string(t));
  }
  return p;
}

inline void check_availability(const CiesConfig& c, const Availability& a) {
  const auto T = static_cast<std::size_t>(c.horizon);
  if (a.pv.size() != T || a.wt.size() != T)
    throw std::invalid_argument("availability must have one value per period");
  for (std::size_t t = 0; t < T; ++t)
    if (!(a.pv[t] >= 0.0) || !(a.wt[t] >= 0.0))
      throw std::invalid_argument("availability must be non-negative");
}

/**
 * Recourse block over [first-stage columns | second-stage columns]. The
 * first-stage columns carry only the per-period fixed MTG cost b·ξ; the
 * start/stop costs stay in build_first_stage. Fixing the first-stage
 * columns yields the scenario LP; copying the block into a master with the
 * first-stage columns shared yields the column-and-constraint cuts.
 *
 * The ESS state is not a column: its window is written on the running sums
 * of charge and discharge, and the last period holds the terminal equality.
 */
inline solver::SparseProblem build_recourse_block(const CiesConfig& c, const Availability& a) {
  using solver::kInf;
  using solver::RowSense;
  using solver::Term;
  using G = SecondStageLayout::Group;
  check_availability(c, a);
  const FirstStageLayout F(c);
  const SecondStageLayout S(c);
  const int T = c.horizon;
  const int off = F.size();
  auto col = [&](G g, int t) { return off + S.at(g, t); };
  auto mtg = [&](int i, int t) { return off + S.mtg(i, t); };

  solver::SparseProblem p;
  // First-stage columns mirror build_first_stage; only their cost differs.
  auto first = build_first_stage(c);
  for (int j = 0; j < F.size(); ++j) {
    p.add_binary(0.0, first.var_names[j], first.priority[j]);
  }
  for (int i = 0; i < F.G; ++i)
    for (int t = 0; t < T; ++t) p.cost[F.xi(i, t)] = c.mtg.b;

  const double mtg_cap = std::min(c.mtg.p_el_max, c.mtg.p_hl_max / c.mtg.heat_ratio);
  const double mtg_cost = c.mtg.a + c.penalties.c_co2 * c.penalties.k_mtg;
  for (int i = 0; i < S.G; ++i)
    for (int t = 0; t < T; ++t)
      p.add_variable(0.0, mtg_cap, mtg_cost, "p_mtg_" + std::to_string(i) + "_" + std::to_string(t));

  const double dtf = c.envelope.params.cap / c.dt;
  for (int g = 0; g < SecondStageLayout::kGroupCount; ++g)
    for (int t = 0; t < T; ++t) {
      const double base = c.profiles.base_eload[t];
      double lo = 0.0, up = kInf, cost = 0.0;
      switch (static_cast<G>(g)) {
        case G::kEbEl: up = c.eb.p_hl_rated / c.eb.eta; break;
        case G::kBuy:
          up = c.grid.buy_cap;
          cost = c.grid.buy_price[t] + c.penalties.c_co2 * c.penalties.k_grid;
          break;
        case G::kSell:
          up = c.grid.sell_cap;
          cost = -c.grid.sell_price[t];
          break;
        case G::kWt: up = a.wt[t]; cost = -c.penalties.c_loss; break;
        case G::kPv: up = a.pv[t]; cost = -c.penalties.c_loss; break;
        case G::kEssCh: up = c.ess.ch_max; cost = c.ess.op_price; break;
        case G::kEssDc: up = c.ess.dc_max; cost = c.ess.op_price; break;
        case G::kHsdCh: up = c.hsd.ch_max; cost = c.hsd.op_price; break;
        case G::kHsdDc: up = c.hsd.dc_max; cost = c.hsd.op_price; break;
        case G::kTsePlus:
        case G::kTseMinus: up = c.idr.tsl_band_frac * base; cost = c.idr.w_tse; break;
        case G::kIe: up = c.idr.eil_frac * base; cost = c.idr.w_eie; break;
        case G::kHie: cost = c.idr.w_hie; break;
        case G::kTin: {
          auto band = comfort_band(c.comfort.pmv_limit[t], c.comfort.params);
          lo = band.first;
          up = band.second;
          break;
        }
        case G::kChsd: lo = c.hsd.c_min; up = c.hsd.c_max; break;
        default: break;
      }
      p.add_variable(lo, up, cost, std::string(SecondStageLayout::kNames[g]) + "_" + std::to_string(t));
    }
  for (int t = 0; t < T; ++t) p.objective_offset += c.penalties.c_loss * (a.pv[t] + a.wt[t]);

  std::vector<Term> row;
  for (int t = 0; t < T; ++t) {
    const std::string ts = std::to_string(t);
    // Electric bus: supply − demand = base load.
    row = {{col(G::kBuy, t), 1.0},      {col(G::kWt, t), 1.0},        {col(G::kPv, t), 1.0},
           {col(G::kEssDc, t), 1.0},    {col(G::kEssCh, t), -1.0},    {col(G::kSell, t), -1.0},
           {col(G::kEbEl, t), -1.0},    {col(G::kTsePlus, t), -1.0},  {col(G::kTseMinus, t), 1.0},
           {col(G::kIe, t), 1.0}};
    for (int i = 0; i < S.G; ++i) row.push_back({mtg(i, t), 1.0});
    p.add_row(row, RowSense::Equal, c.profiles.base_eload[t], "elec_balance_" + ts);

    // Heat bus: supply + H^IE = H^0.
    row = {{col(G::kEbEl, t), c.eb.eta}, {col(G::kHsdDc, t), 1.0}, {col(G::kHsdCh, t), -1.0},
           {col(G::kHie, t), 1.0}};
    for (int i = 0; i < S.G; ++i) row.push_back({mtg(i, t), c.mtg.heat_ratio});
    p.add_row(row, RowSense::Equal, c.base_heat(t), "heat_balance_" + ts);

    // Building, backward Euler: H^0 − H^IE = cap·ΔT/Δt + kf·(T − T_out).
    double rhs = c.base_heat(t) + c.envelope.params.kf * c.profiles.t_out[t];
    row = {{col(G::kHie, t), 1.0}, {col(G::kTin, t), dtf + c.envelope.params.kf}};
    if (t == 0)
      rhs += dtf * c.t_in_start();
    else
      row.push_back({col(G::kTin, t - 1), -dtf});
    p.add_row(row, RowSense::Equal, rhs, "building_" + ts);

    for (int i = 0; i < S.G; ++i) {
      const std::string is = std::to_string(i) + "_" + ts;
      p.add_row({{mtg(i, t), 1.0}, {F.xi(i, t), -c.mtg.p_el_max}}, RowSense::LessEqual, 0.0, "mtg_on_" + is);
      if (t > 0) {
        p.add_row({{mtg(i, t), 1.0}, {mtg(i, t - 1), -1.0}, {F.y(i, t), -c.mtg.p_el_max}}, RowSense::LessEqual,
                  c.mtg.ramp_up, "ramp_up_" + is);
        p.add_row({{mtg(i, t - 1), 1.0}, {mtg(i, t), -1.0}, {F.z(i, t), -c.mtg.p_el_max}}, RowSense::LessEqual,
                  c.mtg.ramp_down, "ramp_down_" + is);
      }
    }

    p.add_row({{col(G::kEssCh, t), 1.0}, {F.bch(t), -c.ess.ch_max}}, RowSense::LessEqual, 0.0, "ess_ch_gate_" + ts);
    p.add_row({{col(G::kEssDc, t), 1.0}, {F.bdc(t), -c.ess.dc_max}}, RowSense::LessEqual, 0.0, "ess_dc_gate_" + ts);
    p.add_row({{col(G::kHsdCh, t), 1.0}, {F.betach(t), -c.hsd.ch_max}}, RowSense::LessEqual, 0.0,
              "hsd_ch_gate_" + ts);
    p.add_row({{col(G::kHsdDc, t), 1.0}, {F.betadc(t), -c.hsd.dc_max}}, RowSense::LessEqual, 0.0,
              "hsd_dc_gate_" + ts);

    // ESS running energy relative to the initial state.
    row.clear();
    for (int k = 0; k <= t; ++k) {
      row.push_back({col(G::kEssCh, k), c.ess.eta_ch});
      row.push_back({col(G::kEssDc, k), -1.0 / c.ess.eta_dc});
    }
    if (t + 1 < T) {
      p.add_row(row, RowSense::GreaterEqual, c.ess.c_min - c.ess.c_init, "ess_min_" + ts);
      p.add_row(row, RowSense::LessEqual, c.ess.c_max - c.ess.c_init, "ess_max_" + ts);
    } else {
      p.add_row(row, RowSense::Equal, 0.0, "ess_terminal");
    }

    row = {{col(G::kChsd, t), 1.0}, {col(G::kHsdCh, t), -c.hsd.eta_ch}, {col(G::kHsdDc, t), 1.0 / c.hsd.eta_dc}};
    double hsd_rhs = 0.0;
    if (t == 0)
      hsd_rhs = c.hsd.c_init;
    else
      row.push_back({col(G::kChsd, t - 1), -1.0});
    p.add_row(row, RowSense::Equal, hsd_rhs, "hsd_state_" + ts);
  }
  row.clear();
  for (int t = 0; t < T; ++t) {
    row.push_back({col(G::kTsePlus, t), 1.0});
    row.push_back({col(G::kTseMinus, t), -1.0});
  }
  p.add_row(row, RowSense::Equal, 0.0, "tsl_net_zero");
  return p;
}

/// Scenario LP for a fixed commitment; columns follow SecondStageLayout.
inline solver::SparseProblem build_second_stage(const CiesConfig& c, const Availability& a,
                                                const FirstStageDecision& u) {
  const FirstStageLayout F(c);
  if (u.T != F.T || u.G != F.G) throw std::invalid_argument("first-stage decision does not match config");
  auto block = build_recourse_block(c, a);
  std::vector<int> cols(F.size());
  std::iota(cols.begin(), cols.end(), 0);
  auto values = u.to_vector();
  return solver::substitute_fixed(block, cols, values).first;
}

/// Start/stop cost of a commitment plan.
inline double first_stage_cost(const CiesConfig& c, const FirstStageDecision& u) {
  double z = 0.0;
  for (std::size_t k = 0; k < u.y.size(); ++k) z += c.mtg.startup_cost * u.y[k] + c.mtg.shutdown_cost * u.z[k];
  return z;
}

}  // namespace ciesdro::cies
