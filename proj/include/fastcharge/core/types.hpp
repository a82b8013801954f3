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

#include <array>

namespace fastcharge {

/// Snapshot of the simulated cell.
struct BatteryState {
  double soc = 0.0;          // fraction in [0, 1]
  double voltage = 0.0;      // terminal voltage, V
  double temperature = 0.0;  // cell temperature, degC
  double rc_voltage = 0.0;   // RC-branch polarization, V
  double throughput_ah = 0.0;
  double r0 = 0.0;           // series resistance after aging, ohm

  bool operator==(const BatteryState&) const = default;
};

/// Observation fed to the actor: cell readings plus the previously applied
/// current (C-rate). Values are in physical units; see Normalizer.
struct AgentState {
  double soc = 0.0;
  double voltage = 0.0;
  double temperature = 0.0;
  double prev_action = 0.0;

  bool operator==(const AgentState&) const = default;
};

/// One replay entry. `action` is the executed (post-projection) C-rate.
struct Transition {
  AgentState state;
  double action = 0.0;
  double reward = 0.0;
  AgentState next_state;
  bool done = false;

  bool operator==(const Transition&) const = default;
};

struct ActionBounds {
  double min = 0.05;  // C-rate
  double max = 4.5;

  double clamp(double a) const { return a < min ? min : (a > max ? max : a); }
  bool contains(double a) const { return a >= min && a <= max; }
  bool operator==(const ActionBounds&) const = default;
};

}  // namespace fastcharge
