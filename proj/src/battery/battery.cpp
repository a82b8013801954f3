/* Copyright 2026 The fastcharge Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "fastcharge/battery/battery.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fastcharge::battery {
namespace {

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw std::invalid_argument(std::string("battery::step: non-finite ") + name);
}

}  // namespace

double ocv(double soc, const BatteryParams& params) {
  const auto& knots = params.ocv_knots;
  const double s = std::clamp(soc, 0.0, 1.0);
  if (s <= knots.front().first) return knots.front().second;
  for (std::size_t i = 1; i < knots.size(); ++i) {
    const auto [s1, v1] = knots[i];
    if (s <= s1) {
      const auto [s0, v0] = knots[i - 1];
      return v0 + (v1 - v0) * (s - s0) / (s1 - s0);
    }
  }
  return knots.back().second;
}

BatteryState step(const BatteryState& state, double current_c, double dt, double ambient,
                  const BatteryParams& params) {
  require_finite(current_c, "current");
  require_finite(dt, "dt");
  require_finite(ambient, "ambient");
  require_finite(state.soc, "soc");
  require_finite(state.temperature, "temperature");
  require_finite(state.rc_voltage, "rc_voltage");
  require_finite(state.r0, "r0");
  if (current_c < 0.0) throw std::invalid_argument("battery::step: charging current must be >= 0");
  if (dt <= 0.0) throw std::invalid_argument("battery::step: dt must be positive");

  const double amps = current_c * params.capacity_ah;
  const double decay = std::exp(-dt / (params.r1 * params.c1));

  BatteryState next = state;
  next.soc = std::clamp(state.soc + params.coulombic_eff * amps * dt / (3600.0 * params.capacity_ah),
                        0.0, 1.0);
  next.rc_voltage = state.rc_voltage * decay + params.r1 * (1.0 - decay) * amps;
  next.voltage = ocv(next.soc, params) + state.r0 * amps + next.rc_voltage;
  const double heat = amps * amps * state.r0 + next.rc_voltage * next.rc_voltage / params.r1 -
                      params.heat_transfer * (state.temperature - ambient);
  next.temperature = state.temperature + dt / params.thermal_mass * heat;
  next.throughput_ah = state.throughput_ah + amps * dt / 3600.0;
  return next;
}

double apply_aging(const BatteryParams& params, double throughput_ah) {
  return params.r0_initial * (1.0 + params.aging_alpha * std::sqrt(std::max(throughput_ah, 0.0)));
}

BatteryState reset(const BatteryParams& params, double soc_start, double ambient,
                   const BatteryState& previous) {
  BatteryState s;
  s.soc = std::clamp(soc_start, 0.0, 1.0);
  s.voltage = ocv(s.soc, params);
  s.temperature = ambient;
  s.rc_voltage = 0.0;
  s.throughput_ah = previous.throughput_ah;
  s.r0 = previous.r0 > 0.0 ? previous.r0 : params.r0_initial;
  return s;
}

double ambient_at(const AmbientSchedule& schedule, int episode) {
  if (episode < schedule.drift_start_episode) return schedule.base_temp;
  const double drifted =
      schedule.base_temp + (episode - schedule.drift_start_episode) * schedule.drift_increment;
  return std::min(drifted, schedule.drift_cap);
}

bool aging_active(const AmbientSchedule& schedule, int episode) {
  return schedule.aging_enabled && episode >= schedule.drift_start_episode;
}

}  // namespace fastcharge::battery
