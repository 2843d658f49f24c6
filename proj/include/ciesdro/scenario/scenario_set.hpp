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
#include <stdexcept>
#include <string>
#include <vector>

#include "ciesdro/scenario/clustering.hpp"

namespace ciesdro::scenario {

/// Joint renewable scenarios: hourly PV and WT availability (kW) with
/// initial probabilities.
struct ScenarioSet {
  std::vector<std::vector<double>> pv;
  std::vector<std::vector<double>> wt;
  std::vector<double> p0;

  int n_s() const { return static_cast<int>(p0.size()); }

  void validate() const {
    const auto n = p0.size();
    if (n == 0) throw std::invalid_argument("ScenarioSet: no scenarios");
    if (pv.size() != n || wt.size() != n)
      throw std::invalid_argument("ScenarioSet: pv/wt/p0 lengths differ");
    double total = 0.0;
    for (double p : p0) {
      if (!(p >= 0.0)) throw std::invalid_argument("ScenarioSet: negative probability");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-9)
      throw std::invalid_argument("ScenarioSet: probabilities sum to " + std::to_string(total));
    for (std::size_t s = 0; s < n; ++s) {
      if (pv[s].size() != kHours || wt[s].size() != kHours)
        throw std::invalid_argument("ScenarioSet: profiles must have 24 values");
      for (int t = 0; t < kHours; ++t)
        if (!(pv[s][t] >= 0.0) || !(wt[s][t] >= 0.0) || !std::isfinite(pv[s][t]) ||
            !std::isfinite(wt[s][t]))
          throw std::invalid_argument("ScenarioSet: availability must be finite and non-negative");
    }
  }

  /// Single scenario holding the probability-weighted mean profiles,
  /// optionally scaled by `factor`.
  ScenarioSet mean(double factor = 1.0) const {
    ScenarioSet m;
    m.pv.assign(1, std::vector<double>(kHours, 0.0));
    m.wt.assign(1, std::vector<double>(kHours, 0.0));
    m.p0 = {1.0};
    for (int s = 0; s < n_s(); ++s)
      for (int t = 0; t < kHours; ++t) {
        m.pv[0][t] += p0[s] * pv[s][t];
        m.wt[0][t] += p0[s] * wt[s][t];
      }
    for (int t = 0; t < kHours; ++t) {
      m.pv[0][t] *= factor;
      m.wt[0][t] *= factor;
    }
    return m;
  }
};

/// Cartesian product of PV and WT clusterings, PV-major.
inline ScenarioSet build_scenario_set(const Clustering& pv, const Clustering& wt) {
  auto check = [](const Clustering& c, const char* what) {
    if (c.k() < 1 || c.probabilities.size() != c.centers.size())
      throw std::invalid_argument(std::string("build_scenario_set: invalid ") + what + " clustering");
    double total = 0.0;
    for (double p : c.probabilities) total += p;
    if (std::abs(total - 1.0) > 1e-9)
      throw std::invalid_argument(std::string("build_scenario_set: ") + what +
                                  " probabilities do not sum to 1");
    for (const auto& ctr : c.centers)
      if (ctr.size() != kHours)
        throw std::invalid_argument(std::string("build_scenario_set: ") + what +
                                    " centers must have 24 values");
  };
  check(pv, "PV");
  check(wt, "WT");
  ScenarioSet out;
  for (int i = 0; i < pv.k(); ++i)
    for (int j = 0; j < wt.k(); ++j) {
      out.pv.push_back(pv.centers[i]);
      out.wt.push_back(wt.centers[j]);
      out.p0.push_back(pv.probabilities[i] * wt.probabilities[j]);
    }
  for (auto& row : out.pv)
    for (double& v : row) v = std::max(v, 0.0);
  for (auto& row : out.wt)
    for (double& v : row) v = std::max(v, 0.0);
  return out;
}

}  // namespace ciesdro::scenario
