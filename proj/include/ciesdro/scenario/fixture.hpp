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
#include <cstdint>
#include <random>
#include <vector>

#include "ciesdro/scenario/clustering.hpp"

namespace ciesdro::scenario {

/// Synthetic two-year renewable history standing in for measured data.
struct FixtureData {
  SampleMatrix pv;
  SampleMatrix wt;
};

namespace detail {

// Box–Muller on the portable uniform draw, so output does not depend on
// the standard library's normal_distribution.
inline double gaussian(std::mt19937_64& rng) {
  double u1 = uniform01(rng);
  double u2 = uniform01(rng);
  if (u1 < 1e-300) u1 = 1e-300;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

inline double clip0(double v) { return v < 0.0 ? 0.0 : v; }

}  // namespace detail

inline constexpr int kFixtureDays = 730;
/// Daylight columns for PV: h06..h19.
inline constexpr int kSunrise = 6;
inline constexpr int kSunset = 20;

/**
 * Deterministic fixture. PV days are clear (peak near 250 kW) or overcast
 * (peak near 80 kW) with a sine-shaped daylight profile, zero outside
 * h06..h19. WT days follow one of four regimes: night-peaking, day-peaking,
 * steady strong and calm.
 */
inline FixtureData generate_fixture(std::uint64_t seed, int days = kFixtureDays) {
  std::mt19937_64 rng(seed);
  FixtureData out;
  out.pv.tag = SourceTag::PV;
  out.wt.tag = SourceTag::WT;
  out.pv.rows = out.wt.rows = days;
  out.pv.values.reserve(static_cast<std::size_t>(days) * kHours);
  out.wt.values.reserve(static_cast<std::size_t>(days) * kHours);

  for (int d = 0; d < days; ++d) {
    bool clear = detail::uniform01(rng) < 0.6;
    double peak = clear ? 250.0 * (1.0 + 0.05 * detail::gaussian(rng)) : 80.0 * (1.0 + 0.15 * detail::gaussian(rng));
    for (int t = 0; t < kHours; ++t) {
      double v = 0.0;
      if (t >= kSunrise && t < kSunset) {
        double shape = std::sin(M_PI * (t - kSunrise + 0.5) / (kSunset - kSunrise));
        double noise = clear ? 0.03 : 0.12;
        v = detail::clip0(peak * shape * (1.0 + noise * detail::gaussian(rng)));
      }
      out.pv.values.push_back(v);
    }
  }

  // Regime shares: night 30%, day 25%, strong 20%, calm 25%.
  constexpr std::array<double, 4> cum = {0.30, 0.55, 0.75, 1.0};
  for (int d = 0; d < days; ++d) {
    double r = detail::uniform01(rng);
    int regime = 0;
    while (regime < 3 && r >= cum[regime]) ++regime;
    double scale = 1.0 + 0.08 * detail::gaussian(rng);
    for (int t = 0; t < kHours; ++t) {
      double night = 0.5 * (1.0 + std::cos(2.0 * M_PI * (t - 2.0) / 24.0));  // peaks at 02:00
      double base = 0.0;
      switch (regime) {
        case 0: base = 30.0 + 170.0 * night; break;
        case 1: base = 30.0 + 150.0 * (1.0 - night); break;
        case 2: base = 170.0; break;
        default: base = 20.0; break;
      }
      out.wt.values.push_back(detail::clip0(base * scale + 6.0 * detail::gaussian(rng)));
    }
  }
  return out;
}

}  // namespace ciesdro::scenario
