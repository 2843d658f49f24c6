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

#include <stdexcept>
#include <utility>

namespace ciesdro::cies {

struct ComfortParams {
  /// Metabolic rate.
  double q = 80.0;
  /// Clothing thermal resistance.
  double i_cl = 0.15;
  /// Skin comfort temperature, °C.
  double t_s = 33.5;
};

struct EnvelopeParams {
  /// Aggregate conductance K·F, kW/°C.
  double kf = 12.0;
  /// Aggregate air heat capacity c·ρ·V, kWh/°C.
  double cap = 60.0;
};

namespace detail {
inline double comfort_scale(const ComfortParams& c) {
  double d = c.q * (c.i_cl + 0.1);
  if (d == 0.0) throw std::domain_error("pmv: Q·(I_cl + 0.1) is zero");
  return d;
}
}  // namespace detail

/// Predicted mean vote at indoor temperature `t_in`.
inline double pmv(double t_in, const ComfortParams& c) {
  return 2.43 - 3.76 * (c.t_s - t_in) / detail::comfort_scale(c);
}

/// Indoor temperature at which the vote equals `vote`.
inline double temperature_for_pmv(double vote, const ComfortParams& c) {
  return c.t_s - (2.43 - vote) * detail::comfort_scale(c) / 3.76;
}

/// Indoor temperature interval with |pmv| <= limit.
inline std::pair<double, double> comfort_band(double limit, const ComfortParams& c) {
  if (!(limit > 0.0)) throw std::invalid_argument("comfort_band: limit must be positive");
  return {temperature_for_pmv(-limit, c), temperature_for_pmv(limit, c)};
}

/// Heating power over one step of length `dt` (backward Euler on the
/// building heat balance).
inline double heat_demand(double t_in_now, double t_in_prev, double t_out, const EnvelopeParams& e,
                          double dt = 1.0) {
  return e.cap * (t_in_now - t_in_prev) / dt + e.kf * (t_in_now - t_out);
}

/// Indoor temperature after one step with heating power `h`; inverse of
/// heat_demand in its first argument.
inline double indoor_step(double t_in_prev, double t_out, double h, const EnvelopeParams& e,
                          double dt = 1.0) {
  return (h + e.cap / dt * t_in_prev + e.kf * t_out) / (e.cap / dt + e.kf);
}

}  // namespace ciesdro::cies
