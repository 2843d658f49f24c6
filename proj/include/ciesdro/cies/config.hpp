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

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ciesdro/cies/comfort.hpp"
#include "json.hpp"

namespace ciesdro::cies {

struct MtgParams {
  int count = 1;
  double p_el_max = 300.0;
  double ramp_up = 50.0;
  double ramp_down = 50.0;
  double p_hl_max = 360.0;
  double heat_ratio = 1.2;
  /// Fuel cost per kWh electric.
  double a = 1.2;
  /// Fixed cost per on-period.
  double b = 0.0015;
  double startup_cost = 0.25;
  double shutdown_cost = 0.25;
  bool initial_status = false;
};

struct StorageParams {
  double ch_max = 0.0;
  double dc_max = 0.0;
  double eta_ch = 1.0;
  double eta_dc = 1.0;
  double c_min = 0.0;
  double c_max = 0.0;
  double c_init = 0.0;
  double op_price = 0.0;
};

struct EbParams {
  double eta = 0.9;
  /// Rated heat output.
  double p_hl_rated = 200.0;
};

struct GridParams {
  double buy_cap = 600.0;
  double sell_cap = 600.0;
  std::vector<double> buy_price;
  std::vector<double> sell_price;
};

struct PenaltyParams {
  double c_loss = 0.62;
  double c_co2 = 0.05;
  double k_mtg = 0.49;
  double k_grid = 0.82;
};

struct IdrParams {
  double w_tse = 0.1;
  double w_eie = 0.3;
  double w_hie = 0.2;
  double tsl_band_frac = 0.10;
  double eil_frac = 0.10;
};

struct ComfortConfig {
  ComfortParams params;
  std::vector<double> pmv_limit;
};

struct EnvelopeConfig {
  EnvelopeParams params;
  /// NaN selects the PMV=0 setpoint.
  double t_in_init = std::nan("");
};

struct Profiles {
  std::vector<double> base_eload;
  std::vector<double> t_out;
};

/// Time-of-use tariff; period t covers [t, t+1) h and is labelled by its end hour.
inline std::vector<double> default_tou_price() {
  std::vector<double> p(24, 0.90);
  for (int t = 0; t <= 6; ++t) p[t] = 0.48;
  p[23] = 0.48;
  for (int t : {8, 9, 10, 18, 19, 20, 21, 22}) p[t] = 1.35;
  return p;
}

inline std::vector<double> default_pmv_limit() {
  std::vector<double> l(24, 0.9);
  for (int t = 7; t <= 18; ++t) l[t] = 0.5;
  return l;
}

inline Profiles default_profiles() {
  Profiles p;
  p.base_eload = {190, 180, 175, 175, 180, 200, 240, 300, 350, 370, 360, 340,
                  320, 310, 305, 315, 340, 390, 440, 460, 450, 400, 320, 240};
  p.t_out = {-7.0, -8.0, -8.5, -9.0, -9.0, -8.5, -8.0, -7.0, -5.5, -4.0, -2.5, -1.0,
             0.0,  0.5,  0.5,  0.0,  -1.0, -2.5, -4.0, -5.0, -5.5, -6.0, -6.5, -7.0};
  return p;
}

struct CiesConfig {
  int horizon = 24;
  double dt = 1.0;
  MtgParams mtg;
  StorageParams ess{20.0, 20.0, 0.95, 0.95, 10.0, 90.0, 10.0, 0.02};
  StorageParams hsd{50.0, 50.0, 0.85, 0.9, 10.0, 150.0, 10.0, 0.011};
  EbParams eb;
  GridParams grid;
  PenaltyParams penalties;
  IdrParams idr;
  ComfortConfig comfort;
  EnvelopeConfig envelope;
  Profiles profiles;

  static CiesConfig defaults() {
    CiesConfig c;
    c.grid.buy_price = default_tou_price();
    c.grid.sell_price.resize(24);
    for (int t = 0; t < 24; ++t) c.grid.sell_price[t] = 0.85 * c.grid.buy_price[t];
    c.comfort.pmv_limit = default_pmv_limit();
    c.profiles = default_profiles();
    return c;
  }

  /// Indoor temperature at PMV = 0.
  double t_set() const { return temperature_for_pmv(0.0, comfort.params); }
  double t_in_start() const { return std::isnan(envelope.t_in_init) ? t_set() : envelope.t_in_init; }
  /// Heat that holds the setpoint against the outdoor temperature.
  double base_heat(int t) const { return envelope.params.kf * (t_set() - profiles.t_out[t]); }

  /// Throws std::invalid_argument naming the first broken invariant.
  void validate() const {
    auto fail = [](const std::string& m) { throw std::invalid_argument("config: " + m); };
    auto nonneg = [&](double v, const char* name) {
      if (!(v >= 0.0) || !std::isfinite(v)) fail(std::string(name) + " must be finite and >= 0");
    };
    auto unit = [&](double v, const char* name) {
      if (!(v > 0.0 && v <= 1.0)) fail(std::string(name) + " must lie in (0,1]");
    };
    if (horizon < 1) fail("horizon must be >= 1");
    if (!(dt > 0.0)) fail("dt must be positive");
    const auto T = static_cast<std::size_t>(horizon);
    if (mtg.count < 1) fail("mtg.count must be >= 1");
    for (double v : {mtg.p_el_max, mtg.ramp_up, mtg.ramp_down, mtg.p_hl_max, mtg.heat_ratio, mtg.a, mtg.b,
                     mtg.startup_cost, mtg.shutdown_cost})
      nonneg(v, "mtg parameter");
    for (const auto* s : {&ess, &hsd}) {
      for (double v : {s->ch_max, s->dc_max, s->c_min, s->c_max, s->c_init, s->op_price}) nonneg(v, "storage parameter");
      unit(s->eta_ch, "storage eta_ch");
      unit(s->eta_dc, "storage eta_dc");
      if (!(s->c_min <= s->c_init && s->c_init <= s->c_max)) fail("storage needs c_min <= c_init <= c_max");
    }
    if (!(eb.eta > 0.0)) fail("eb.eta must be positive");
    nonneg(eb.p_hl_rated, "eb.p_hl_rated");
    nonneg(grid.buy_cap, "grid.buy_cap");
    nonneg(grid.sell_cap, "grid.sell_cap");
    if (grid.buy_price.size() != T || grid.sell_price.size() != T) fail("grid prices need one entry per period");
    for (std::size_t t = 0; t < T; ++t) {
      nonneg(grid.buy_price[t], "grid.buy_price");
      nonneg(grid.sell_price[t], "grid.sell_price");
      if (!(grid.sell_price[t] < grid.buy_price[t])) fail("sell price must stay below buy price");
    }
    for (double v : {penalties.c_loss, penalties.c_co2, penalties.k_mtg, penalties.k_grid}) nonneg(v, "penalty");
    for (double v : {idr.w_tse, idr.w_eie, idr.w_hie, idr.tsl_band_frac, idr.eil_frac}) nonneg(v, "idr parameter");
    if (!(comfort.params.q > 0.0)) fail("comfort.q must be positive");
    nonneg(comfort.params.i_cl, "comfort.i_cl");
    if (comfort.pmv_limit.size() != T) fail("comfort.pmv_limit needs one entry per period");
    for (double l : comfort.pmv_limit)
      if (l != 0.5 && l != 0.9) fail("comfort.pmv_limit entries must be 0.5 or 0.9");
    if (!(envelope.params.kf > 0.0) || !(envelope.params.cap > 0.0)) fail("envelope kf and cap must be positive");
    if (profiles.base_eload.size() != T || profiles.t_out.size() != T) fail("profiles need one entry per period");
    for (double v : profiles.base_eload) nonneg(v, "profiles.base_eload");
    for (double v : profiles.t_out)
      if (!std::isfinite(v)) fail("profiles.t_out must be finite");
    if (!std::isnan(envelope.t_in_init)) {
      auto lo = comfort_band(comfort.pmv_limit[0], comfort.params);
      if (envelope.t_in_init < lo.first || envelope.t_in_init > lo.second) fail("envelope.t_in_init outside comfort band");
    }
  }
};

// JSON mirrors the struct field names. Missing keys keep their defaults.

inline void to_json(nlohmann::json& j, const StorageParams& s) {
  j = {{"ch_max", s.ch_max}, {"dc_max", s.dc_max}, {"eta_ch", s.eta_ch}, {"eta_dc", s.eta_dc},
       {"c_min", s.c_min},   {"c_max", s.c_max},   {"c_init", s.c_init}, {"op_price", s.op_price}};
}

inline nlohmann::json config_to_json(const CiesConfig& c) {
  using nlohmann::json;
  json j;
  j["horizon"] = c.horizon;
  j["dt"] = c.dt;
  j["mtg"] = {{"count", c.mtg.count},
              {"p_el_max", c.mtg.p_el_max},
              {"ramp_up", c.mtg.ramp_up},
              {"ramp_down", c.mtg.ramp_down},
              {"p_hl_max", c.mtg.p_hl_max},
              {"heat_ratio", c.mtg.heat_ratio},
              {"a", c.mtg.a},
              {"b", c.mtg.b},
              {"startup_cost", c.mtg.startup_cost},
              {"shutdown_cost", c.mtg.shutdown_cost},
              {"initial_status", c.mtg.initial_status}};
  j["ess"] = c.ess;
  j["hsd"] = c.hsd;
  j["eb"] = {{"eta", c.eb.eta}, {"p_hl_rated", c.eb.p_hl_rated}};
  j["grid"] = {{"buy_cap", c.grid.buy_cap},
               {"sell_cap", c.grid.sell_cap},
               {"buy_price", c.grid.buy_price},
               {"sell_price", c.grid.sell_price}};
  j["penalties"] = {{"c_loss", c.penalties.c_loss},
                    {"c_co2", c.penalties.c_co2},
                    {"k_mtg", c.penalties.k_mtg},
                    {"k_grid", c.penalties.k_grid}};
  j["idr"] = {{"w_tse", c.idr.w_tse},
              {"w_eie", c.idr.w_eie},
              {"w_hie", c.idr.w_hie},
              {"tsl_band_frac", c.idr.tsl_band_frac},
              {"eil_frac", c.idr.eil_frac}};
  j["comfort"] = {{"q", c.comfort.params.q},
                  {"i_cl", c.comfort.params.i_cl},
                  {"t_s", c.comfort.params.t_s},
                  {"pmv_limit", c.comfort.pmv_limit}};
  j["envelope"] = {{"kf", c.envelope.params.kf}, {"cap", c.envelope.params.cap}};
  j["envelope"]["t_in_init"] = std::isnan(c.envelope.t_in_init) ? json(nullptr) : json(c.envelope.t_in_init);
  j["profiles"] = {{"base_eload", c.profiles.base_eload}, {"t_out", c.profiles.t_out}};
  return j;
}

namespace detail {

template <class T>
void read_opt(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

inline void read_storage(const nlohmann::json& j, StorageParams& s) {
  read_opt(j, "ch_max", s.ch_max);
  read_opt(j, "dc_max", s.dc_max);
  read_opt(j, "eta_ch", s.eta_ch);
  read_opt(j, "eta_dc", s.eta_dc);
  read_opt(j, "c_min", s.c_min);
  read_opt(j, "c_max", s.c_max);
  read_opt(j, "c_init", s.c_init);
  read_opt(j, "op_price", s.op_price);
}

}  // namespace detail

/// Parses and validates; any failure surfaces as std::invalid_argument.
inline CiesConfig config_from_json(const nlohmann::json& j) {
  using detail::read_opt;
  CiesConfig c = CiesConfig::defaults();
  try {
    if (!j.is_object()) throw std::invalid_argument("top level must be an object");
    read_opt(j, "horizon", c.horizon);
    read_opt(j, "dt", c.dt);
    if (j.contains("mtg")) {
      const auto& m = j.at("mtg");
      read_opt(m, "count", c.mtg.count);
      read_opt(m, "p_el_max", c.mtg.p_el_max);
      read_opt(m, "ramp_up", c.mtg.ramp_up);
      read_opt(m, "ramp_down", c.mtg.ramp_down);
      read_opt(m, "p_hl_max", c.mtg.p_hl_max);
      read_opt(m, "heat_ratio", c.mtg.heat_ratio);
      read_opt(m, "a", c.mtg.a);
      read_opt(m, "b", c.mtg.b);
      read_opt(m, "startup_cost", c.mtg.startup_cost);
      read_opt(m, "shutdown_cost", c.mtg.shutdown_cost);
      read_opt(m, "initial_status", c.mtg.initial_status);
    }
    if (j.contains("ess")) detail::read_storage(j.at("ess"), c.ess);
    if (j.contains("hsd")) detail::read_storage(j.at("hsd"), c.hsd);
    if (j.contains("eb")) {
      read_opt(j.at("eb"), "eta", c.eb.eta);
      read_opt(j.at("eb"), "p_hl_rated", c.eb.p_hl_rated);
    }
    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      read_opt(g, "buy_cap", c.grid.buy_cap);
      read_opt(g, "sell_cap", c.grid.sell_cap);
      bool has_sell = g.contains("sell_price");
      read_opt(g, "buy_price", c.grid.buy_price);
      read_opt(g, "sell_price", c.grid.sell_price);
      if (!has_sell) {
        c.grid.sell_price.resize(c.grid.buy_price.size());
        for (std::size_t t = 0; t < c.grid.buy_price.size(); ++t) c.grid.sell_price[t] = 0.85 * c.grid.buy_price[t];
      }
    }
    if (j.contains("penalties")) {
      const auto& p = j.at("penalties");
      read_opt(p, "c_loss", c.penalties.c_loss);
      read_opt(p, "c_co2", c.penalties.c_co2);
      read_opt(p, "k_mtg", c.penalties.k_mtg);
      read_opt(p, "k_grid", c.penalties.k_grid);
    }
    if (j.contains("idr")) {
      const auto& d = j.at("idr");
      read_opt(d, "w_tse", c.idr.w_tse);
      read_opt(d, "w_eie", c.idr.w_eie);
      read_opt(d, "w_hie", c.idr.w_hie);
      read_opt(d, "tsl_band_frac", c.idr.tsl_band_frac);
      read_opt(d, "eil_frac", c.idr.eil_frac);
    }
    if (j.contains("comfort")) {
      const auto& k = j.at("comfort");
      read_opt(k, "q", c.comfort.params.q);
      read_opt(k, "i_cl", c.comfort.params.i_cl);
      read_opt(k, "t_s", c.comfort.params.t_s);
      read_opt(k, "pmv_limit", c.comfort.pmv_limit);
    }
    if (j.contains("envelope")) {
      const auto& e = j.at("envelope");
      read_opt(e, "kf", c.envelope.params.kf);
      read_opt(e, "cap", c.envelope.params.cap);
      if (e.contains("t_in_init") && !e.at("t_in_init").is_null())
        c.envelope.t_in_init = e.at("t_in_init").get<double>();
    }
    if (j.contains("profiles")) {
      read_opt(j.at("profiles"), "base_eload", c.profiles.base_eload);
      read_opt(j.at("profiles"), "t_out", c.profiles.t_out);
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

inline CiesConfig read_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("config: cannot open " + path);
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("config: " + path + ": " + e.what());
  }
  return config_from_json(j);
}

}  // namespace ciesdro::cies
