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
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "ciesdro/solver/lp.hpp"

namespace ciesdro::ambiguity {

/// Deviation budgets around the empirical distribution: θ_1 bounds the
/// total absolute shift, θ_∞ the shift of any single scenario.
struct AmbiguityBudget {
  long m_hist = 0;
  int n_s = 0;
  double alpha1 = 0.0;
  double alphainf = 0.0;
  double theta1 = 0.0;
  double thetainf = 0.0;

  static AmbiguityBudget fixed(int n_s, double theta1, double thetainf) {
    if (!(theta1 >= 0.0) || !(thetainf >= 0.0))
      throw std::invalid_argument("AmbiguityBudget: budgets must be non-negative");
    AmbiguityBudget b;
    b.n_s = n_s;
    b.theta1 = theta1;
    b.thetainf = thetainf;
    return b;
  }
};

/// θ_1 = (n/2M)·ln(2n/(1−α_1)), θ_∞ = (1/2M)·ln(2n/(1−α_∞)), clamped at 0.
inline AmbiguityBudget compute_budgets(long m_hist, int n_s, double alpha1, double alphainf) {
  if (m_hist < 1) throw std::invalid_argument("compute_budgets: M must be at least 1");
  if (n_s < 1) throw std::invalid_argument("compute_budgets: n_s must be at least 1");
  auto check = [](double a, const char* name) {
    if (!(a > 0.0 && a < 1.0))
      throw std::invalid_argument(std::string("compute_budgets: ") + name + " must lie in (0,1)");
  };
  check(alpha1, "alpha1");
  check(alphainf, "alphainf");
  AmbiguityBudget b;
  b.m_hist = m_hist;
  b.n_s = n_s;
  b.alpha1 = alpha1;
  b.alphainf = alphainf;
  const double n = n_s;
  const double two_m = 2.0 * static_cast<double>(m_hist);
  b.theta1 = std::max(0.0, n / two_m * std::log(2.0 * n / (1.0 - alpha1)));
  b.thetainf = std::max(0.0, 1.0 / two_m * std::log(2.0 * n / (1.0 - alphainf)));
  return b;
}

struct WorstCaseDistribution {
  std::vector<double> p;
  std::vector<double> plus;
  std::vector<double> minus;
  double objective = 0.0;
};

namespace detail {

inline void check_inputs(const std::vector<double>& p0, const std::vector<double>& f,
                         const AmbiguityBudget& b) {
  if (p0.empty()) throw std::invalid_argument("worst case: no scenarios");
  if (p0.size() != f.size()) throw std::invalid_argument("worst case: p0 and f differ in length");
  double total = 0.0;
  for (double p : p0) {
    if (!(p >= -1e-9)) throw std::invalid_argument("worst case: p0 has a negative entry");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("worst case: p0 is off the simplex");
  for (double v : f)
    if (!std::isfinite(v)) throw std::invalid_argument("worst case: non-finite scenario cost");
  if (!(b.theta1 >= 0.0) || !(b.thetainf >= 0.0))
    throw std::invalid_argument("worst case: budgets must be non-negative");
}

inline double expectation(const std::vector<double>& p, const std::vector<double>& f) {
  double z = 0.0;
  for (std::size_t s = 0; s < p.size(); ++s) z += p[s] * f[s];
  return z;
}

}  // namespace detail

/// Maximizes Σ p_s f_s over the budgeted set by linear programming in the
/// shift variables p⁺, p⁻ ≥ 0.
inline WorstCaseDistribution worst_case_lp(const std::vector<double>& p0, const std::vector<double>& f,
                                           const AmbiguityBudget& budget) {
  detail::check_inputs(p0, f, budget);
  using namespace solver;
  const int n = static_cast<int>(p0.size());
  SparseProblem lp;
  std::vector<int> plus(n), minus(n);
  for (int s = 0; s < n; ++s) plus[s] = lp.add_variable(0.0, kInf, -f[s], "p_plus_" + std::to_string(s));
  for (int s = 0; s < n; ++s) minus[s] = lp.add_variable(0.0, kInf, f[s], "p_minus_" + std::to_string(s));
  std::vector<Term> all, net;
  for (int s = 0; s < n; ++s) {
    all.push_back({plus[s], 1.0});
    all.push_back({minus[s], 1.0});
    net.push_back({plus[s], 1.0});
    net.push_back({minus[s], -1.0});
  }
  lp.add_row(all, RowSense::LessEqual, budget.theta1, "one_norm");
  lp.add_row(net, RowSense::Equal, 0.0, "mass");
  for (int s = 0; s < n; ++s) {
    lp.add_row({{plus[s], 1.0}, {minus[s], 1.0}}, RowSense::LessEqual, budget.thetainf,
               "inf_norm_" + std::to_string(s));
    lp.add_row({{minus[s], 1.0}}, RowSense::LessEqual, std::max(0.0, p0[s]), "nonneg_" + std::to_string(s));
  }
  auto sol = solve_lp(lp);
  if (!sol.optimal())
    throw SolverFailure("builtin", std::string("worst-case LP ended ") + to_string(sol.status));
  WorstCaseDistribution out;
  out.plus.resize(n);
  out.minus.resize(n);
  out.p.resize(n);
  for (int s = 0; s < n; ++s) {
    out.plus[s] = sol.values[plus[s]];
    out.minus[s] = sol.values[minus[s]];
    out.p[s] = std::max(0.0, p0[s] + out.plus[s] - out.minus[s]);
  }
  out.objective = detail::expectation(out.p, f);
  return out;
}

/**
 * Same maximization by direct mass transfer: the costliest scenarios
 * receive, the cheapest donate, pairwise while the cost gap is positive.
 * Receivers are capped by θ_∞, donors by min(θ_∞, p0), the total by θ_1/2.
 * Among equal costs mass flows to the lower index, so unbounded budgets
 * put everything on the first argmax.
 */
inline WorstCaseDistribution worst_case_greedy(const std::vector<double>& p0, const std::vector<double>& f,
                                               const AmbiguityBudget& budget) {
  detail::check_inputs(p0, f, budget);
  const int n = static_cast<int>(p0.size());
  std::vector<int> recv(n), give(n);
  std::iota(recv.begin(), recv.end(), 0);
  std::iota(give.begin(), give.end(), 0);
  std::stable_sort(recv.begin(), recv.end(), [&](int a, int b) { return f[a] > f[b]; });
  std::stable_sort(give.begin(), give.end(), [&](int a, int b) { return f[a] < f[b]; });

  WorstCaseDistribution out;
  out.plus.assign(n, 0.0);
  out.minus.assign(n, 0.0);
  double left = budget.theta1 / 2.0;
  int i = 0, j = 0;
  while (left > 0.0 && i < n && j < n) {
    int hi = recv[i], lo = give[j];
    if (hi == lo || out.plus[lo] > 0.0) {
      ++j;
      continue;
    }
    if (out.minus[hi] > 0.0) {
      ++i;
      continue;
    }
    // Equal costs move toward the lower index.
    if (f[hi] < f[lo] || (f[hi] == f[lo] && hi > lo)) break;
    double room_hi = budget.thetainf - out.plus[hi];
    double room_lo = std::min(budget.thetainf, std::max(0.0, p0[lo])) - out.minus[lo];
    if (room_hi <= 0.0) {
      ++i;
      continue;
    }
    if (room_lo <= 0.0) {
      ++j;
      continue;
    }
    double amt = std::min({room_hi, room_lo, left});
    out.plus[hi] += amt;
    out.minus[lo] += amt;
    left -= amt;
  }
  out.p.resize(n);
  for (int s = 0; s < n; ++s) out.p[s] = std::max(0.0, p0[s] + out.plus[s] - out.minus[s]);
  out.objective = detail::expectation(out.p, f);
  return out;
}

}  // namespace ciesdro::ambiguity
