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
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ciesdro/cies/model.hpp"

namespace ciesdro::cies {

struct CostBreakdown {
  double c_startstop = 0.0;
  double c_mtg = 0.0;
  double c_buy = 0.0;
  double c_sell_profit = 0.0;
  double c_ess = 0.0;
  double c_hsd = 0.0;
  double c_loss = 0.0;
  double c_co2 = 0.0;
  double c_idr = 0.0;
  double total = 0.0;

  double sum() const {
    return c_startstop + c_mtg + c_buy + c_ess + c_hsd + c_loss + c_co2 + c_idr - c_sell_profit;
  }
};

/// Raised when a dispatch breaks the scenario constraints.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(const std::string& what, std::vector<std::string> rows)
      : std::runtime_error(what), rows_(std::move(rows)) {}
  const std::vector<std::string>& rows() const { return rows_; }

 private:
  std::vector<std::string> rows_;
};

/// Every cost term, without feasibility checks.
inline CostBreakdown evaluate_costs(const CiesConfig& c, const FirstStageDecision& u, const SecondStageDecision& v,
                                    const Availability& a) {
  CostBreakdown out;
  const int T = c.horizon;
  out.c_startstop = first_stage_cost(c, u);
  for (int t = 0; t < T; ++t) {
    for (int i = 0; i < v.G; ++i) {
      out.c_mtg += c.mtg.a * v.p_mtg[i * T + t] + c.mtg.b * u.xi[i * T + t];
      out.c_co2 += c.penalties.c_co2 * c.penalties.k_mtg * v.p_mtg[i * T + t];
    }
    out.c_buy += c.grid.buy_price[t] * v.p_buy[t];
    out.c_sell_profit += c.grid.sell_price[t] * v.p_sell[t];
    out.c_ess += c.ess.op_price * (v.p_ess_ch[t] + v.p_ess_dc[t]);
    out.c_hsd += c.hsd.op_price * (v.p_hsd_ch[t] + v.p_hsd_dc[t]);
    out.c_loss += c.penalties.c_loss * ((a.pv[t] - v.p_pv[t]) + (a.wt[t] - v.p_wt[t]));
    out.c_co2 += c.penalties.c_co2 * c.penalties.k_grid * v.p_buy[t];
    out.c_idr += c.idr.w_tse * (v.p_tse_plus[t] + v.p_tse_minus[t]) + c.idr.w_eie * v.p_ie[t] +
                 c.idr.w_hie * v.h_ie[t];
  }
  out.total = out.sum();
  return out;
}

/// Cost terms of a feasible dispatch; throws ValidationError listing the
/// violated rows otherwise.
inline CostBreakdown cost_breakdown(const CiesConfig& c, const FirstStageDecision& u, const SecondStageDecision& v,
                                    const Availability& a, double tol = 1e-6) {
  auto lp = build_second_stage(c, a, u);
  auto x = v.to_vector();
  auto bad = lp.violated_rows(x, tol);
  if (!bad.empty()) {
    std::ostringstream os;
    os << "dispatch violates " << bad.size() << " constraint(s):";
    for (std::size_t k = 0; k < std::min<std::size_t>(bad.size(), 8); ++k) os << ' ' << bad[k];
    throw ValidationError(os.str(), std::move(bad));
  }
  return evaluate_costs(c, u, v, a);
}

/**
 * Physical checks on a dispatch, independent of the LP rows: both energy
 * balances, load-shift neutrality, interruption cap, ESS terminal state,
 * comfort band, grid exclusivity, MTG coupling. Returns one message per
 * failure.
 */
inline std::vector<std::string> audit_dispatch(const CiesConfig& c, const FirstStageDecision& u,
                                               const SecondStageDecision& v, const Availability& a,
                                               double tol = 1e-6) {
  std::vector<std::string> bad;
  auto flag = [&](bool ok, const std::string& what, int t) {
    if (!ok) bad.push_back(what + (t >= 0 ? " at t=" + std::to_string(t) : std::string()));
  };
  const int T = c.horizon;
  if (v.T != T || v.G != c.mtg.count) {
    bad.push_back("dispatch shape does not match config");
    return bad;
  }
  for (const auto& m : u.check(c.mtg.initial_status)) bad.push_back(m);
  double net_shift = 0.0;
  double t_prev = c.t_in_start();
  for (int t = 0; t < T; ++t) {
    flag(std::abs(v.electric_residual(c, t)) <= tol, "electric balance residual", t);
    flag(std::abs(v.heat_residual(c, t)) <= tol, "heat balance residual", t);
    net_shift += v.p_tse_plus[t] - v.p_tse_minus[t];
    flag(v.p_ie[t] <= c.idr.eil_frac * c.profiles.base_eload[t] + tol, "interruptible load above cap", t);
    flag(v.p_tse_plus[t] <= c.idr.tsl_band_frac * c.profiles.base_eload[t] + tol &&
             v.p_tse_minus[t] <= c.idr.tsl_band_frac * c.profiles.base_eload[t] + tol,
         "time shift outside band", t);
    auto band = comfort_band(c.comfort.pmv_limit[t], c.comfort.params);
    flag(v.t_in[t] >= band.first - tol && v.t_in[t] <= band.second + tol, "indoor temperature outside band", t);
    double h = heat_demand(v.t_in[t], t_prev, c.profiles.t_out[t], c.envelope.params, c.dt);
    flag(std::abs(h - v.heat_load(c, t)) <= tol, "building heat balance", t);
    t_prev = v.t_in[t];
    flag(std::min(v.p_buy[t], v.p_sell[t]) <= tol, "simultaneous buy and sell", t);
    flag(v.p_pv[t] <= a.pv[t] + tol && v.p_wt[t] <= a.wt[t] + tol, "renewable dispatch above availability", t);
    double e = v.ess_state(c, t);
    flag(e >= c.ess.c_min - tol && e <= c.ess.c_max + tol, "ESS state outside window", t);
    flag(v.c_hsd[t] >= c.hsd.c_min - tol && v.c_hsd[t] <= c.hsd.c_max + tol, "HSD state outside window", t);
    for (int i = 0; i < v.G; ++i) {
      double p = v.p_mtg[i * T + t];
      flag(p <= c.mtg.p_el_max * u.xi[i * T + t] + tol, "MTG output while off", t);
      flag(v.mtg_heat(c, i, t) <= c.mtg.p_hl_max + tol, "MTG heat above cap", t);
    }
    flag(c.eb.eta * v.p_eb_el[t] <= c.eb.p_hl_rated + tol, "EB heat above rating", t);
  }
  flag(std::abs(net_shift) <= tol, "time shift not net zero", -1);
  flag(std::abs(v.ess_state(c, T - 1) - c.ess.c_init) <= tol, "ESS terminal state differs from initial", -1);
  return bad;
}

}  // namespace ciesdro::cies
