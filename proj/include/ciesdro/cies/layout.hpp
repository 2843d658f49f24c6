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

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "ciesdro/cies/config.hpp"

namespace ciesdro::cies {

/// Column positions of the first-stage binaries: groups ξ, y, z (each
/// unit-major, then period), then B^ch, B^dc, β^ch, β^dc per period.
struct FirstStageLayout {
  int T = 24;
  int G = 1;

  FirstStageLayout() = default;
  explicit FirstStageLayout(const CiesConfig& c) : T(c.horizon), G(c.mtg.count) {}

  int xi(int i, int t) const { return i * T + t; }
  int y(int i, int t) const { return G * T + i * T + t; }
  int z(int i, int t) const { return 2 * G * T + i * T + t; }
  int bch(int t) const { return 3 * G * T + t; }
  int bdc(int t) const { return 3 * G * T + T + t; }
  int betach(int t) const { return 3 * G * T + 2 * T + t; }
  int betadc(int t) const { return 3 * G * T + 3 * T + t; }
  int size() const { return 3 * G * T + 4 * T; }
};

/// Column positions of the recourse variables: P^MTG per unit first, then
/// the fifteen per-period groups in Group order.
struct SecondStageLayout {
  enum Group : int {
    kEbEl = 0,
    kBuy,
    kSell,
    kWt,
    kPv,
    kEssCh,
    kEssDc,
    kHsdCh,
    kHsdDc,
    kTsePlus,
    kTseMinus,
    kIe,
    kHie,
    kTin,
    kChsd,
    kGroupCount
  };
  static constexpr std::array<const char*, kGroupCount> kNames = {
      "p_eb_el", "p_buy", "p_sell", "p_wt", "p_pv", "p_ess_ch", "p_ess_dc", "p_hsd_ch",
      "p_hsd_dc", "p_tse_plus", "p_tse_minus", "p_ie", "h_ie", "t_in", "c_hsd"};

  int T = 24;
  int G = 1;

  SecondStageLayout() = default;
  explicit SecondStageLayout(const CiesConfig& c) : T(c.horizon), G(c.mtg.count) {}

  int mtg(int i, int t) const { return i * T + t; }
  int at(Group g, int t) const { return G * T + static_cast<int>(g) * T + t; }
  int size() const { return (G + kGroupCount) * T; }
};

struct FirstStageDecision {
  int T = 0;
  int G = 0;
  /// Indexed [i*T + t].
  std::vector<int> xi, y, z;
  std::vector<int> bch, bdc, betach, betadc;

  static FirstStageDecision zeros(const CiesConfig& c) {
    FirstStageDecision u;
    u.T = c.horizon;
    u.G = c.mtg.count;
    u.xi.assign(u.G * u.T, 0);
    u.y = u.z = u.xi;
    u.bch.assign(u.T, 0);
    u.bdc = u.betach = u.betadc = u.bch;
    return u;
  }

  /// Rounds a solver vector laid out per FirstStageLayout.
  static FirstStageDecision from_vector(const FirstStageLayout& L, const std::vector<double>& x,
                                        std::size_t offset = 0) {
    FirstStageDecision u;
    u.T = L.T;
    u.G = L.G;
    auto bit = [&](int col) { return x.at(offset + col) > 0.5 ? 1 : 0; };
    u.xi.resize(L.G * L.T);
    u.y.resize(L.G * L.T);
    u.z.resize(L.G * L.T);
    for (int i = 0; i < L.G; ++i)
      for (int t = 0; t < L.T; ++t) {
        u.xi[i * L.T + t] = bit(L.xi(i, t));
        u.y[i * L.T + t] = bit(L.y(i, t));
        u.z[i * L.T + t] = bit(L.z(i, t));
      }
    u.bch.resize(L.T);
    u.bdc.resize(L.T);
    u.betach.resize(L.T);
    u.betadc.resize(L.T);
    for (int t = 0; t < L.T; ++t) {
      u.bch[t] = bit(L.bch(t));
      u.bdc[t] = bit(L.bdc(t));
      u.betach[t] = bit(L.betach(t));
      u.betadc[t] = bit(L.betadc(t));
    }
    return u;
  }

  std::vector<double> to_vector() const {
    FirstStageLayout L;
    L.T = T;
    L.G = G;
    std::vector<double> x(L.size(), 0.0);
    for (int i = 0; i < G; ++i)
      for (int t = 0; t < T; ++t) {
        x[L.xi(i, t)] = xi[i * T + t];
        x[L.y(i, t)] = y[i * T + t];
        x[L.z(i, t)] = z[i * T + t];
      }
    for (int t = 0; t < T; ++t) {
      x[L.bch(t)] = bch[t];
      x[L.bdc(t)] = bdc[t];
      x[L.betach(t)] = betach[t];
      x[L.betadc(t)] = betadc[t];
    }
    return x;
  }

  /// Messages for each broken invariant; empty when consistent.
  std::vector<std::string> check(bool initial_status) const {
    std::vector<std::string> bad;
    for (int i = 0; i < G; ++i)
      for (int t = 0; t < T; ++t) {
        int k = i * T + t;
        int prev = t == 0 ? (initial_status ? 1 : 0) : xi[k - 1];
        if (y[k] + z[k] > 1) bad.push_back("startup and shutdown together at t=" + std::to_string(t));
        if (xi[k] - prev != y[k] - z[k]) bad.push_back("status linkage broken at t=" + std::to_string(t));
      }
    for (int t = 0; t < T; ++t) {
      if (bch[t] + bdc[t] > 1) bad.push_back("ESS flags overlap at t=" + std::to_string(t));
      if (betach[t] + betadc[t] > 1) bad.push_back("HSD flags overlap at t=" + std::to_string(t));
    }
    return bad;
  }

  bool operator==(const FirstStageDecision&) const = default;
};

/// Recourse dispatch for one scenario, plus derived bookkeeping.
struct SecondStageDecision {
  int T = 0;
  int G = 0;
  /// Indexed [i*T + t].
  std::vector<double> p_mtg;
  std::vector<double> p_eb_el, p_buy, p_sell, p_wt, p_pv, p_ess_ch, p_ess_dc, p_hsd_ch, p_hsd_dc, p_tse_plus,
      p_tse_minus, p_ie, h_ie, t_in, c_hsd;

  std::vector<double>* group(SecondStageLayout::Group g) {
    std::array<std::vector<double>*, SecondStageLayout::kGroupCount> all = {
        &p_eb_el, &p_buy, &p_sell, &p_wt, &p_pv, &p_ess_ch, &p_ess_dc, &p_hsd_ch,
        &p_hsd_dc, &p_tse_plus, &p_tse_minus, &p_ie, &h_ie, &t_in, &c_hsd};
    return all[g];
  }
  const std::vector<double>* group(SecondStageLayout::Group g) const {
    return const_cast<SecondStageDecision*>(this)->group(g);
  }

  static SecondStageDecision from_vector(const SecondStageLayout& L, const std::vector<double>& x,
                                         std::size_t offset = 0) {
    SecondStageDecision v;
    v.T = L.T;
    v.G = L.G;
    v.p_mtg.resize(L.G * L.T);
    for (int i = 0; i < L.G; ++i)
      for (int t = 0; t < L.T; ++t) v.p_mtg[i * L.T + t] = x.at(offset + L.mtg(i, t));
    for (int g = 0; g < SecondStageLayout::kGroupCount; ++g) {
      auto* out = v.group(static_cast<SecondStageLayout::Group>(g));
      out->resize(L.T);
      for (int t = 0; t < L.T; ++t) (*out)[t] = x.at(offset + L.at(static_cast<SecondStageLayout::Group>(g), t));
    }
    return v;
  }

  std::vector<double> to_vector() const {
    SecondStageLayout L;
    L.T = T;
    L.G = G;
    std::vector<double> x(L.size(), 0.0);
    for (int i = 0; i < G; ++i)
      for (int t = 0; t < T; ++t) x[L.mtg(i, t)] = p_mtg[i * T + t];
    for (int g = 0; g < SecondStageLayout::kGroupCount; ++g) {
      const auto* in = group(static_cast<SecondStageLayout::Group>(g));
      for (int t = 0; t < T; ++t) x[L.at(static_cast<SecondStageLayout::Group>(g), t)] = (*in)[t];
    }
    return x;
  }

  double mtg_total(int t) const {
    double s = 0.0;
    for (int i = 0; i < G; ++i) s += p_mtg[i * T + t];
    return s;
  }

  /// Heat output of unit i.
  double mtg_heat(const CiesConfig& c, int i, int t) const { return c.mtg.heat_ratio * p_mtg[i * T + t]; }

  /// Heat delivered to the building, H^0 − H^IE.
  double heat_load(const CiesConfig& c, int t) const { return c.base_heat(t) - h_ie[t]; }

  /// ESS state of charge after period t.
  double ess_state(const CiesConfig& c, int t) const {
    double e = c.ess.c_init;
    for (int k = 0; k <= t; ++k) e += c.ess.eta_ch * p_ess_ch[k] - p_ess_dc[k] / c.ess.eta_dc;
    return e;
  }

  /// Net demand after time shifting and interruption.
  double load(const CiesConfig& c, int t) const {
    return c.profiles.base_eload[t] + p_tse_plus[t] - p_tse_minus[t] - p_ie[t];
  }

  /// Supply minus demand on the electric bus.
  double electric_residual(const CiesConfig& c, int t) const {
    double supply = p_buy[t] + p_wt[t] + p_pv[t] + p_ess_dc[t] + mtg_total(t);
    double demand = load(c, t) + p_ess_ch[t] + p_sell[t] + p_eb_el[t];
    return supply - demand;
  }

  /// Supply minus demand on the heat bus.
  double heat_residual(const CiesConfig& c, int t) const {
    double supply = c.mtg.heat_ratio * mtg_total(t) + c.eb.eta * p_eb_el[t] + p_hsd_dc[t] - p_hsd_ch[t];
    return supply - heat_load(c, t);
  }
};

}  // namespace ciesdro::cies
