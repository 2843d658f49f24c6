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

#include "ciesdro/ambiguity/worst_case.hpp"
#include "oracles.hpp"

namespace {

using namespace ciesdro::ambiguity;
using ciesdro::testing::random_instance;
using ciesdro::testing::uniform01;
using ciesdro::testing::uniform_int;

// Maximum of Σ p f over the budgeted set by vertex enumeration in (p⁺, p⁻).
double vertex_oracle(const std::vector<double>& p0, const std::vector<double>& f, double t1, double tinf) {
  using namespace ciesdro::solver;
  const int n = static_cast<int>(p0.size());
  SparseProblem q;
  for (int s = 0; s < n; ++s) q.add_variable(0.0, tinf, -f[s]);
  for (int s = 0; s < n; ++s) q.add_variable(0.0, std::min(tinf, p0[s]), f[s]);
  std::vector<Term> all, net;
  for (int s = 0; s < n; ++s) {
    all.push_back({s, 1.0});
    all.push_back({n + s, 1.0});
    net.push_back({s, 1.0});
    net.push_back({n + s, -1.0});
    q.add_row({{s, 1.0}, {n + s, 1.0}}, RowSense::LessEqual, tinf);
  }
  q.add_row(all, RowSense::LessEqual, t1);
  q.add_row(net, RowSense::Equal, 0.0);
  auto r = ciesdro::testing::vertex_enumeration(q);
  double base = 0.0;
  for (int s = 0; s < n; ++s) base += p0[s] * f[s];
  return base - r.objective;
}

TEST(Budgets, FixtureValues) {
  auto b = compute_budgets(5000, 8, 0.99, 0.99);
  EXPECT_NEAR(b.theta1, 5.9022e-3, 1e-7);
  EXPECT_NEAR(b.thetainf, 7.3778e-4, 1e-8);
  EXPECT_NEAR(b.theta1, 8.0 / 10000.0 * std::log(1600.0), 1e-15);
}

TEST(Budgets, SmallCase) {
  auto b = compute_budgets(100, 2, 0.5, 0.5);
  EXPECT_NEAR(b.theta1, 0.01 * std::log(8.0), 1e-15);
  EXPECT_NEAR(b.thetainf, 0.005 * std::log(8.0), 1e-15);
  EXPECT_NEAR(b.theta1, 2.0794e-2, 1e-6);
  EXPECT_NEAR(b.thetainf, 1.0397e-2, 1e-6);
}

TEST(Budgets, DoublingMHalves) {
  for (long m : {10L, 100L, 5000L}) {
    auto a = compute_budgets(m, 8, 0.9, 0.8);
    auto b = compute_budgets(2 * m, 8, 0.9, 0.8);
    EXPECT_NEAR(b.theta1, a.theta1 / 2.0, 1e-16);
    EXPECT_NEAR(b.thetainf, a.thetainf / 2.0, 1e-16);
  }
}

TEST(Budgets, InverseIdentity) {
  for (double a : {0.2, 0.5, 0.8, 0.99}) {
    auto b = compute_budgets(5000, 8, a, a);
    EXPECT_NEAR(1.0 - 16.0 * std::exp(-2.0 * 5000 * b.theta1 / 8.0), a, 1e-12);
    EXPECT_NEAR(1.0 - 16.0 * std::exp(-2.0 * 5000 * b.thetainf), a, 1e-12);
  }
}

TEST(Budgets, RejectsOutOfRange) {
  EXPECT_THROW(compute_budgets(0, 8, 0.9, 0.9), std::invalid_argument);
  EXPECT_THROW(compute_budgets(10, 0, 0.9, 0.9), std::invalid_argument);
  EXPECT_THROW(compute_budgets(10, 8, 1.0, 0.9), std::invalid_argument);
  EXPECT_THROW(compute_budgets(10, 8, 0.9, 0.0), std::invalid_argument);
}

TEST(WorstCase, ZeroBudgetKeepsP0) {
  std::vector<double> p0{0.2, 0.3, 0.5}, f{5, 1, 3};
  for (auto wc : {worst_case_lp(p0, f, AmbiguityBudget::fixed(3, 0, 0)),
                  worst_case_greedy(p0, f, AmbiguityBudget::fixed(3, 0, 0))}) {
    for (int s = 0; s < 3; ++s) EXPECT_NEAR(wc.p[s], p0[s], 1e-12);
    EXPECT_NEAR(wc.objective, 0.2 * 5 + 0.3 + 1.5, 1e-12);
  }
}

TEST(WorstCase, FourScenarioExample) {
  std::vector<double> p0{0.25, 0.25, 0.25, 0.25}, f{4, 3, 2, 1};
  auto b = AmbiguityBudget::fixed(4, 0.2, 0.15);
  EXPECT_NEAR(vertex_oracle(p0, f, 0.2, 0.15), 2.8, 1e-12);
  for (auto wc : {worst_case_lp(p0, f, b), worst_case_greedy(p0, f, b)}) {
    std::vector<double> want{0.35, 0.25, 0.25, 0.15};
    for (int s = 0; s < 4; ++s) EXPECT_NEAR(wc.p[s], want[s], 1e-9);
    EXPECT_NEAR(wc.objective, 2.8, 1e-9);
  }
}

TEST(WorstCase, TwoScenarioExample) {
  std::vector<double> p0{0.5, 0.5}, f{10, 20};
  auto b = AmbiguityBudget::fixed(2, 0.2, 0.2);
  EXPECT_NEAR(vertex_oracle(p0, f, 0.2, 0.2), 16.0, 1e-12);
  for (auto wc : {worst_case_lp(p0, f, b), worst_case_greedy(p0, f, b)}) {
    EXPECT_NEAR(wc.p[0], 0.4, 1e-9);
    EXPECT_NEAR(wc.p[1], 0.6, 1e-9);
    EXPECT_NEAR(wc.objective, 16.0, 1e-9);
  }
}

TEST(WorstCase, SingleScenario) {
  for (auto wc : {worst_case_lp({1.0}, {7.0}, AmbiguityBudget::fixed(1, 2, 1)),
                  worst_case_greedy({1.0}, {7.0}, AmbiguityBudget::fixed(1, 2, 1))}) {
    EXPECT_NEAR(wc.p[0], 1.0, 1e-12);
    EXPECT_NEAR(wc.objective, 7.0, 1e-12);
  }
}

TEST(WorstCase, ConstantCostIsBudgetInvariant) {
  std::vector<double> p0{0.1, 0.6, 0.3}, f{4, 4, 4};
  auto g = worst_case_greedy(p0, f, AmbiguityBudget::fixed(3, 0.5, 0.3));
  EXPECT_NEAR(g.objective, 4.0, 1e-12);
  EXPECT_NEAR(worst_case_lp(p0, f, AmbiguityBudget::fixed(3, 0.5, 0.3)).objective, 4.0, 1e-12);
}

TEST(WorstCase, UnboundBudgetsPickArgmaxLowestIndex) {
  std::vector<double> p0{0.1, 0.2, 0.3, 0.4}, f{1, 9, 9, 2};
  auto g = worst_case_greedy(p0, f, AmbiguityBudget::fixed(4, 2.0, 1.0));
  EXPECT_NEAR(g.p[1], 1.0, 1e-12);
  EXPECT_NEAR(g.objective, 9.0, 1e-12);
  auto l = worst_case_lp(p0, f, AmbiguityBudget::fixed(4, 2.0, 1.0));
  EXPECT_NEAR(l.objective, 9.0, 1e-9);
}

TEST(WorstCase, LpMatchesGreedyOnRandomInstances) {
  std::mt19937_64 rng(2026);
  for (int trial = 0; trial < 200; ++trial) {
    auto in = random_instance(rng);
    auto l = worst_case_lp(in.p0, in.f, in.b);
    auto g = worst_case_greedy(in.p0, in.f, in.b);
    EXPECT_NEAR(l.objective, g.objective, 1e-8) << "trial " << trial;
  }
}

TEST(WorstCase, ResultLiesInTheSet) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    auto in = random_instance(rng);
    for (auto wc : {worst_case_lp(in.p0, in.f, in.b), worst_case_greedy(in.p0, in.f, in.b)}) {
      double total = 0.0, moved = 0.0;
      for (std::size_t s = 0; s < wc.p.size(); ++s) {
        EXPECT_GE(wc.p[s], 0.0);
        total += wc.p[s];
        double shift = wc.plus[s] + wc.minus[s];
        moved += shift;
        EXPECT_LE(shift, in.b.thetainf + 1e-9);
        EXPECT_NEAR(wc.p[s], in.p0[s] + wc.plus[s] - wc.minus[s], 1e-9);
      }
      EXPECT_NEAR(total, 1.0, 1e-9);
      EXPECT_LE(moved, in.b.theta1 + 1e-9);
      double base = 0.0;
      for (std::size_t s = 0; s < wc.p.size(); ++s) base += in.p0[s] * in.f[s];
      EXPECT_GE(wc.objective, base - 1e-12);
    }
  }
}

TEST(WorstCase, MonotoneInBudgets) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    auto in = random_instance(rng);
    double prev = -1e300;
    for (double t1 : {0.0, 0.05, 0.1, 0.3, 1.0}) {
      double z = worst_case_lp(in.p0, in.f, AmbiguityBudget::fixed(in.b.n_s, t1, in.b.thetainf)).objective;
      EXPECT_GE(z, prev - 1e-12);
      prev = z;
    }
    prev = -1e300;
    for (double ti : {0.0, 0.02, 0.1, 0.5}) {
      double z = worst_case_lp(in.p0, in.f, AmbiguityBudget::fixed(in.b.n_s, in.b.theta1, ti)).objective;
      EXPECT_GE(z, prev - 1e-12);
      prev = z;
    }
  }
}

TEST(WorstCase, CombinedSetInsideEachSingleNormSet) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    auto in = random_instance(rng);
    double both = worst_case_lp(in.p0, in.f, in.b).objective;
    double one = worst_case_lp(in.p0, in.f, AmbiguityBudget::fixed(in.b.n_s, in.b.theta1, 1.0)).objective;
    double inf = worst_case_lp(in.p0, in.f, AmbiguityBudget::fixed(in.b.n_s, 2.0, in.b.thetainf)).objective;
    EXPECT_LE(both, std::min(one, inf) + 1e-9);
  }
}

TEST(WorstCase, RejectsOffSimplex) {
  EXPECT_THROW(worst_case_lp({0.5, 0.6}, {1, 2}, AmbiguityBudget::fixed(2, 0.1, 0.1)), std::invalid_argument);
  EXPECT_THROW(worst_case_greedy({0.5, 0.6}, {1, 2}, AmbiguityBudget::fixed(2, 0.1, 0.1)), std::invalid_argument);
  EXPECT_THROW(worst_case_lp({1.0}, {1, 2}, AmbiguityBudget::fixed(1, 0.1, 0.1)), std::invalid_argument);
}

}  // namespace
