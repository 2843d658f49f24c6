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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ciesdro/cies/costs.hpp"
#include "ciesdro/solver/lp.hpp"
#include "ciesdro/solver/milp.hpp"
#include "oracles.hpp"

namespace ciesdro::cies {
namespace {

using solver::SparseProblem;

Availability typical_day(double pv_peak = 200.0, double wt_level = 80.0) {
  Availability a;
  a.pv.assign(24, 0.0);
  a.wt.assign(24, wt_level);
  for (int t = 6; t <= 18; ++t) a.pv[t] = pv_peak * std::sin(M_PI * (t - 6) / 12.0);
  for (int t = 0; t < 24; ++t) a.wt[t] = wt_level * (1.0 + 0.3 * std::cos(2.0 * M_PI * t / 24.0));
  return a;
}

FirstStageDecision all_on(const CiesConfig& c) {
  auto u = FirstStageDecision::zeros(c);
  for (int t = 0; t < c.horizon; ++t) {
    u.xi[t] = 1;
    u.bch[t] = t < 12 ? 1 : 0;
    u.bdc[t] = t < 12 ? 0 : 1;
    u.betach[t] = t % 2;
    u.betadc[t] = 1 - t % 2;
  }
  u.y[0] = c.mtg.initial_status ? 0 : 1;
  return u;
}

/// Single-scenario MILP: commitment and dispatch together.
SparseProblem joint_problem(const CiesConfig& c, const Availability& a) {
  auto p = build_recourse_block(c, a);
  auto first = build_first_stage(c);
  for (int j = 0; j < first.n_vars(); ++j) p.cost[j] += first.cost[j];
  for (int i = 0; i < first.n_rows(); ++i) p.add_row({}, first.sense[i], first.rhs[i], first.row_names[i]);
  int base = p.n_rows() - first.n_rows();
  for (const auto& e : first.entries) p.entries.push_back({base + e.row, e.col, e.value});
  return p;
}

// ---------------------------------------------------------------- comfort

TEST(Comfort, PmvMatchesHandValues) {
  ComfortParams k;
  EXPECT_NEAR(pmv(20.574468085106382, k), 0.0, 1e-12);
  EXPECT_NEAR(pmv(k.t_s, k), 2.43, 1e-12);
  EXPECT_NEAR(pmv(23.234042553191490, k), 0.5, 1e-12);
}

TEST(Comfort, BandMatchesHandValues) {
  ComfortParams k;
  auto b5 = comfort_band(0.5, k);
  EXPECT_NEAR(b5.first, 17.914893617, 1e-8);
  EXPECT_NEAR(b5.second, 23.234042553, 1e-8);
  auto b9 = comfort_band(0.9, k);
  EXPECT_NEAR(b9.first, 15.787234042, 1e-8);
  EXPECT_NEAR(b9.second, 25.361702127, 1e-8);
}

TEST(Comfort, BandEndsInvertPmv) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 100; ++k) {
    ComfortParams c{40.0 + 80.0 * testing::uniform01(rng), 0.5 * testing::uniform01(rng),
                    30.0 + 5.0 * testing::uniform01(rng)};
    double lim = 0.05 + 2.0 * testing::uniform01(rng);
    auto b = comfort_band(lim, c);
    EXPECT_NEAR(pmv(b.first, c), -lim, 1e-12);
    EXPECT_NEAR(pmv(b.second, c), lim, 1e-12);
  }
}

TEST(Comfort, DegenerateParametersThrow) {
  EXPECT_THROW(pmv(20.0, ComfortParams{0.0, 0.15, 33.5}), std::domain_error);
  EXPECT_THROW(comfort_band(0.0, ComfortParams{}), std::invalid_argument);
}

TEST(Thermal, HeatDemandHandValues) {
  EnvelopeParams e{0.2, 0.5};
  EXPECT_NEAR(heat_demand(20.0, 20.0, 0.0, e), 4.0, 1e-12);
  EXPECT_NEAR(heat_demand(5.0, 5.0, 5.0, e), 0.0, 1e-12);
  EXPECT_NEAR(heat_demand(20.0, 18.0, 0.0, e), 5.0, 1e-12);
}

TEST(Thermal, StepInvertsDemand) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 200; ++k) {
    EnvelopeParams e{0.1 + 30.0 * testing::uniform01(rng), 0.1 + 100.0 * testing::uniform01(rng)};
    double now = 10.0 + 15.0 * testing::uniform01(rng);
    double prev = 10.0 + 15.0 * testing::uniform01(rng);
    double out = -20.0 + 30.0 * testing::uniform01(rng);
    double dt = 0.25 + testing::uniform01(rng);
    EXPECT_NEAR(indoor_step(prev, out, heat_demand(now, prev, out, e, dt), e, dt), now, 1e-9);
  }
}

// ----------------------------------------------------------------- config

TEST(Config, DefaultsValidate) {
  auto c = CiesConfig::defaults();
  EXPECT_NO_THROW(c.validate());
  EXPECT_NEAR(c.t_set(), 20.574468085106382, 1e-12);
}

TEST(Config, TouTariffByPeriod) {
  auto p = default_tou_price();
  ASSERT_EQ(p.size(), 24u);
  for (int t : {0, 1, 2, 3, 4, 5, 6, 23}) EXPECT_EQ(p[t], 0.48) << t;
  for (int t : {7, 11, 12, 13, 14, 15, 16, 17}) EXPECT_EQ(p[t], 0.90) << t;
  for (int t : {8, 9, 10, 18, 19, 20, 21, 22}) EXPECT_EQ(p[t], 1.35) << t;
  auto l = default_pmv_limit();
  for (int t = 0; t < 24; ++t) EXPECT_EQ(l[t], (t >= 7 && t <= 18) ? 0.5 : 0.9) << t;
}

TEST(Config, JsonRoundTrip) {
  auto c = CiesConfig::defaults();
  c.mtg.count = 2;
  c.envelope.t_in_init = 19.0;
  c.hsd.c_max = 120.0;
  auto back = config_from_json(config_to_json(c));
  EXPECT_EQ(config_to_json(back).dump(), config_to_json(c).dump());
}

TEST(Config, MissingKeysKeepDefaults) {
  auto c = config_from_json(nlohmann::json::parse(R"({"mtg": {"a": 1.5}})"));
  EXPECT_EQ(c.mtg.a, 1.5);
  EXPECT_EQ(c.mtg.p_el_max, 300.0);
  EXPECT_EQ(c.grid.buy_price, default_tou_price());
}

TEST(Config, BadValuesRejected) {
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"ess": {"c_init": 200}})")), std::invalid_argument);
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"mtg": {"a": "x"}})")), std::invalid_argument);
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"comfort": {"pmv_limit": [0.7]}})")),
               std::invalid_argument);
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"grid": {"sell_price": [2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2]}})")),
               std::invalid_argument);
  EXPECT_THROW(config_from_json(nlohmann::json::parse("[1,2]")), std::invalid_argument);
}

// ------------------------------------------------------------ first stage

TEST(FirstStage, HasOneHundredSixtyEightBinaries) {
  auto p = build_first_stage(CiesConfig::defaults());
  EXPECT_EQ(p.n_vars(), 168);
  EXPECT_EQ(p.num_binaries(), 168);
  EXPECT_EQ(FirstStageLayout(CiesConfig::defaults()).size(), 168);
}

TEST(FirstStage, OneStartOneStopCostsHalf) {
  auto c = CiesConfig::defaults();
  auto p = build_first_stage(c);
  auto u = FirstStageDecision::zeros(c);
  for (int t = 5; t < 15; ++t) u.xi[t] = 1;
  u.y[5] = 1;
  u.z[15] = 1;
  EXPECT_TRUE(u.check(false).empty());
  auto x = u.to_vector();
  EXPECT_LE(p.max_violation(x), 0.0);
  EXPECT_NEAR(p.objective(x), 0.5, 1e-12);
  EXPECT_NEAR(first_stage_cost(c, u), 0.5, 1e-12);
}

TEST(FirstStage, AllOffCostsNothing) {
  auto c = CiesConfig::defaults();
  auto p = build_first_stage(c);
  auto x = FirstStageDecision::zeros(c).to_vector();
  EXPECT_LE(p.max_violation(x), 0.0);
  EXPECT_EQ(p.objective(x), 0.0);
}

TEST(FirstStage, LinkageRejectsUnexplainedSwitch) {
  auto c = CiesConfig::defaults();
  auto p = build_first_stage(c);
  auto u = FirstStageDecision::zeros(c);
  u.xi[3] = 1;  // turns on without a startup
  EXPECT_FALSE(u.check(false).empty());
  EXPECT_GT(p.max_violation(u.to_vector()), 0.5);
}

TEST(FirstStage, InitialStatusOnAllowsRunningWithoutStartup) {
  auto c = CiesConfig::defaults();
  c.mtg.initial_status = true;
  auto u = FirstStageDecision::zeros(c);
  for (int t = 0; t < 24; ++t) u.xi[t] = 1;
  EXPECT_TRUE(u.check(true).empty());
  EXPECT_LE(build_first_stage(c).max_violation(u.to_vector()), 0.0);
}

TEST(FirstStage, VectorRoundTrip) {
  auto c = CiesConfig::defaults();
  auto u = all_on(c);
  EXPECT_EQ(FirstStageDecision::from_vector(FirstStageLayout(c), u.to_vector()), u);
}

// ----------------------------------------------------------- second stage

TEST(SecondStage, HasThreeHundredEightyFourColumns) {
  auto c = CiesConfig::defaults();
  auto lp = build_second_stage(c, typical_day(), all_on(c));
  EXPECT_EQ(lp.n_vars(), 384);
  EXPECT_EQ(lp.num_binaries(), 0);
  EXPECT_EQ(SecondStageLayout(c).size(), 384);
}

TEST(SecondStage, EmptySystemCostsNothing) {
  auto c = CiesConfig::defaults();
  c.profiles.base_eload.assign(24, 0.0);
  c.profiles.t_out.assign(24, c.t_set());
  Availability a{std::vector<double>(24, 0.0), std::vector<double>(24, 0.0)};
  auto u = FirstStageDecision::zeros(c);
  auto sol = solver::solve_lp(build_second_stage(c, a, u));
  ASSERT_TRUE(sol.optimal());
  EXPECT_NEAR(sol.objective, 0.0, 1e-9);
  auto v = SecondStageDecision::from_vector(SecondStageLayout(c), sol.values);
  for (int t = 0; t < 24; ++t) {
    EXPECT_NEAR(v.p_mtg[t] + v.p_eb_el[t] + v.p_buy[t] + v.p_sell[t] + v.p_ess_ch[t] + v.p_ess_dc[t] +
                    v.p_hsd_ch[t] + v.p_hsd_dc[t] + v.p_tse_plus[t] + v.p_tse_minus[t] + v.p_ie[t] + v.h_ie[t],
                0.0, 1e-9);
  }
  auto costs = evaluate_costs(c, u, v, a);
  for (double term : {costs.c_startstop, costs.c_mtg, costs.c_buy, costs.c_sell_profit, costs.c_ess, costs.c_hsd,
                      costs.c_loss, costs.c_co2, costs.c_idr})
    EXPECT_NEAR(term, 0.0, 1e-9);
}

TEST(SecondStage, SolvedDispatchPassesEveryPhysicalCheck) {
  auto c = CiesConfig::defaults();
  auto a = typical_day();
  auto u = all_on(c);
  auto sol = solver::solve_lp(build_second_stage(c, a, u));
  ASSERT_TRUE(sol.optimal());
  auto v = SecondStageDecision::from_vector(SecondStageLayout(c), sol.values);
  for (int t = 0; t < 24; ++t) {
    EXPECT_LE(std::abs(v.electric_residual(c, t)), 1e-6) << t;
    EXPECT_LE(std::abs(v.heat_residual(c, t)), 1e-6) << t;
    EXPECT_NEAR(v.mtg_heat(c, 0, t), 1.2 * v.p_mtg[t], 1e-12);
  }
  auto bad = audit_dispatch(c, u, v, a);
  EXPECT_TRUE(bad.empty()) << (bad.empty() ? "" : bad.front());
  auto costs = cost_breakdown(c, u, v, a);
  EXPECT_NEAR(costs.total, sol.objective + first_stage_cost(c, u), 1e-6);
  EXPECT_NEAR(costs.total, costs.sum(), 1e-12);
}

TEST(SecondStage, RandomScenariosBalanceAndNeverTradeBothWays) {
  auto c = CiesConfig::defaults();
  auto u = all_on(c);
  std::mt19937_64 rng(11);
  for (int k = 0; k < 12; ++k) {
    Availability a;
    for (int t = 0; t < 24; ++t) {
      a.pv.push_back(t >= 6 && t <= 18 ? 500.0 * testing::uniform01(rng) : 0.0);
      a.wt.push_back(400.0 * testing::uniform01(rng));
    }
    auto sol = solver::solve_lp(build_second_stage(c, a, u));
    ASSERT_TRUE(sol.optimal()) << k;
    auto v = SecondStageDecision::from_vector(SecondStageLayout(c), sol.values);
    auto bad = audit_dispatch(c, u, v, a);
    EXPECT_TRUE(bad.empty()) << k << ": " << (bad.empty() ? "" : bad.front());
    EXPECT_NEAR(cost_breakdown(c, u, v, a).total, sol.objective + first_stage_cost(c, u), 1e-6);
  }
}

// The availability-dependent curtailment constant is excluded: the claim
// that shrinking the feasible set cannot help holds for the decision-
// dependent part of the objective only.
TEST(SecondStage, ShrinkingAvailabilityNeverLowersDecisionCost) {
  auto c = CiesConfig::defaults();
  auto u = all_on(c);
  std::mt19937_64 rng(17);
  for (int k = 0; k < 10; ++k) {
    auto a = typical_day(100.0 + 300.0 * testing::uniform01(rng), 50.0 + 200.0 * testing::uniform01(rng));
    auto b = a;
    for (int t = 0; t < 24; ++t) {
      b.pv[t] *= testing::uniform01(rng);
      b.wt[t] *= testing::uniform01(rng);
    }
    auto la = build_second_stage(c, a, u);
    auto lb = build_second_stage(c, b, u);
    auto sa = solver::solve_lp(la);
    auto sb = solver::solve_lp(lb);
    ASSERT_TRUE(sa.optimal() && sb.optimal());
    EXPECT_GE(sb.objective - lb.objective_offset, sa.objective - la.objective_offset - 1e-6) << k;
  }
}

TEST(SecondStage, CommitmentOffForcesGridAndBoilerSupply) {
  auto c = CiesConfig::defaults();
  // Mild day: the boiler alone covers the heat.
  c.profiles.t_out.assign(24, 6.0);
  auto u = FirstStageDecision::zeros(c);
  auto a = typical_day();
  auto sol = solver::solve_lp(build_second_stage(c, a, u));
  ASSERT_TRUE(sol.optimal());
  auto v = SecondStageDecision::from_vector(SecondStageLayout(c), sol.values);
  for (int t = 0; t < 24; ++t) {
    EXPECT_NEAR(v.p_mtg[t], 0.0, 1e-9);
    EXPECT_NEAR(v.p_ess_ch[t] + v.p_ess_dc[t] + v.p_hsd_ch[t] + v.p_hsd_dc[t], 0.0, 1e-9);
  }
  EXPECT_TRUE(audit_dispatch(c, u, v, a).empty());
}

TEST(SecondStage, UnservableHeatIsInfeasible) {
  auto c = CiesConfig::defaults();
  c.profiles.t_out.assign(24, -60.0);
  auto sol = solver::solve_lp(build_second_stage(c, typical_day(), FirstStageDecision::zeros(c)));
  EXPECT_EQ(sol.status, solver::SolveStatus::Infeasible);
}

TEST(SecondStage, RejectsMismatchedInputs) {
  auto c = CiesConfig::defaults();
  Availability shortday{std::vector<double>(23, 0.0), std::vector<double>(24, 0.0)};
  EXPECT_THROW(build_second_stage(c, shortday, all_on(c)), std::invalid_argument);
  auto u = all_on(c);
  u.T = 12;
  EXPECT_THROW(build_second_stage(c, typical_day(), u), std::invalid_argument);
}

TEST(SecondStage, TwoUnitsShareTheLayout) {
  auto c = CiesConfig::defaults();
  c.mtg.count = 2;
  EXPECT_EQ(build_first_stage(c).n_vars(), 3 * 2 * 24 + 4 * 24);
  auto u = FirstStageDecision::zeros(c);
  for (int t = 0; t < 24; ++t) u.xi[24 + t] = 1;
  u.y[24] = 1;
  auto lp = build_second_stage(c, typical_day(), u);
  EXPECT_EQ(lp.n_vars(), 17 * 24);
  auto sol = solver::solve_lp(lp);
  ASSERT_TRUE(sol.optimal());
  auto v = SecondStageDecision::from_vector(SecondStageLayout(c), sol.values);
  for (int t = 0; t < 24; ++t) EXPECT_NEAR(v.p_mtg[t], 0.0, 1e-9);
  EXPECT_TRUE(audit_dispatch(c, u, v, typical_day()).empty());
}

// ------------------------------------------------------------------ costs

CiesConfig one_period() {
  auto c = CiesConfig::defaults();
  c.horizon = 1;
  c.grid.buy_price = {0.9};
  c.grid.sell_price = {0.765};
  c.comfort.pmv_limit = {0.5};
  c.profiles.base_eload = {100.0};
  // Heat need equal to the MTG output at 100 kW.
  c.profiles.t_out = {c.t_set() - 120.0 / c.envelope.params.kf};
  return c;
}

TEST(Costs, MtgTermHandValue) {
  auto c = one_period();
  auto u = FirstStageDecision::zeros(c);
  u.xi[0] = 1;
  u.y[0] = 1;
  SecondStageDecision v = SecondStageDecision::from_vector(SecondStageLayout(c), std::vector<double>(16, 0.0));
  v.p_mtg[0] = 100.0;
  v.t_in[0] = c.t_set();
  v.c_hsd[0] = c.hsd.c_init;
  Availability a{{0.0}, {0.0}};
  auto costs = cost_breakdown(c, u, v, a);
  EXPECT_NEAR(costs.c_mtg, 120.0015, 1e-12);
  EXPECT_NEAR(costs.c_co2, 0.05 * 0.49 * 100.0, 1e-12);
  EXPECT_NEAR(costs.c_startstop, 0.25, 1e-12);
}

TEST(Costs, CurtailmentHandValue) {
  auto c = one_period();
  auto u = FirstStageDecision::zeros(c);
  SecondStageDecision v = SecondStageDecision::from_vector(SecondStageLayout(c), std::vector<double>(16, 0.0));
  v.p_pv[0] = 40.0;
  Availability a{{50.0}, {0.0}};
  EXPECT_NEAR(evaluate_costs(c, u, v, a).c_loss, 6.2, 1e-12);
}

TEST(Costs, InfeasibleDispatchListsRows) {
  auto c = CiesConfig::defaults();
  auto u = all_on(c);
  auto a = typical_day();
  auto sol = solver::solve_lp(build_second_stage(c, a, u));
  ASSERT_TRUE(sol.optimal());
  auto v = SecondStageDecision::from_vector(SecondStageLayout(c), sol.values);
  v.p_buy[7] += 25.0;
  try {
    cost_breakdown(c, u, v, a);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    ASSERT_FALSE(e.rows().empty());
    EXPECT_NE(std::find(e.rows().begin(), e.rows().end(), "elec_balance_7"), e.rows().end());
  }
  EXPECT_FALSE(audit_dispatch(c, u, v, a).empty());
}

TEST(Costs, AuditCatchesBrokenInvariants) {
  auto c = CiesConfig::defaults();
  auto u = all_on(c);
  auto a = typical_day();
  auto sol = solver::solve_lp(build_second_stage(c, a, u));
  ASSERT_TRUE(sol.optimal());
  auto v0 = SecondStageDecision::from_vector(SecondStageLayout(c), sol.values);
  auto v = v0;
  v.p_ie[3] = 0.5 * c.profiles.base_eload[3];
  EXPECT_FALSE(audit_dispatch(c, u, v, a).empty());
  v = v0;
  v.t_in[10] = 30.0;
  EXPECT_FALSE(audit_dispatch(c, u, v, a).empty());
  v = v0;
  v.p_buy[2] += 5.0;
  v.p_sell[2] += 5.0;
  EXPECT_FALSE(audit_dispatch(c, u, v, a).empty());
  v = v0;
  v.p_tse_plus[4] += 1.0;
  v.p_buy[4] += 1.0;
  EXPECT_FALSE(audit_dispatch(c, u, v, a).empty());
}

// ----------------------------------------------------------- joint MILP

TEST(JointProblem, CommitmentBeatsFixedPlans) {
  auto c = CiesConfig::defaults();
  auto a = typical_day();
  auto joint = joint_problem(c, a);
  auto sol = solver::solve_milp(joint);
  ASSERT_TRUE(sol.optimal());
  FirstStageLayout F(c);
  auto u = FirstStageDecision::from_vector(F, sol.values);
  EXPECT_TRUE(u.check(c.mtg.initial_status).empty());
  auto v = SecondStageDecision::from_vector(SecondStageLayout(c), sol.values, F.size());
  EXPECT_TRUE(audit_dispatch(c, u, v, a).empty());
  EXPECT_NEAR(cost_breakdown(c, u, v, a).total, sol.objective, 1e-6);
  ASSERT_TRUE(solver::solve_lp(build_second_stage(c, a, all_on(c))).optimal());
  for (const auto& plan : {all_on(c), FirstStageDecision::zeros(c)}) {
    auto fixed = solver::solve_lp(build_second_stage(c, a, plan));
    if (!fixed.optimal()) continue;  // all-off cannot meet winter heat
    EXPECT_LE(sol.objective, fixed.objective + first_stage_cost(c, plan) + 1e-6);
  }
}

}  // namespace
}  // namespace ciesdro::cies
