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

#pragma once

#include <utility>
#include <vector>

namespace fastcharge {

/// Equivalent-circuit + lumped-thermal cell parameters.
struct BatteryParams {
  double capacity_ah = 5.0;
  double r0_initial = 0.01;      // ohm
  double r1 = 0.015;             // ohm
  double c1 = 2000.0;            // farad
  std::vector<std::pair<double, double>> ocv_knots = {
      {0.0, 3.00}, {0.1, 3.35}, {0.2, 3.45}, {0.4, 3.50},
      {0.6, 3.70}, {0.8, 3.95}, {0.9, 4.05}, {1.0, 4.20}};
  double thermal_mass = 75.0;    // J/degC
  double heat_transfer = 0.5;    // W/degC
  double aging_alpha = 0.02;     // relative resistance growth per sqrt(Ah)
  double coulombic_eff = 1.0;

  bool operator==(const BatteryParams&) const = default;
};

/// Ambient temperature and aging schedule over training episodes.
struct AmbientSchedule {
  double base_temp = 25.0;
  int drift_start_episode = 0;
  double drift_increment = 0.0;  // degC per episode
  double drift_cap = 25.0;
  bool aging_enabled = false;

  bool operator==(const AmbientSchedule&) const = default;
};

struct CccvParams {
  double cc_rate = 2.0;             // C-rate
  double cv_voltage = 4.25;         // V
  double cv_gain = 50.0;            // A/V
  double termination_current = 0.05;  // C-rate, floor of the CV phase

  bool operator==(const CccvParams&) const = default;
};

/// Fixed ranges used to map AgentState fields onto [0, 1].
struct NormalizationBounds {
  double voltage_min = 3.0;
  double voltage_max = 4.6;
  double temperature_min = 0.0;
  double temperature_max = 60.0;

  bool operator==(const NormalizationBounds&) const = default;
};

}  // namespace fastcharge
