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

#include "fastcharge/core/params.hpp"
#include "fastcharge/core/types.hpp"

namespace fastcharge::battery {

/// Piecewise-linear open-circuit voltage. soc is clamped to [0, 1].
double ocv(double soc, const BatteryParams& params);

/// Advances the cell by one sampling period at a constant charging current
/// given in C-rate. The RC branch is integrated exactly, the thermal node by
/// forward Euler. Throws std::invalid_argument on negative current,
/// non-positive dt or non-finite inputs.
BatteryState step(const BatteryState& state, double current_c, double dt, double ambient,
                  const BatteryParams& params);

/// Series resistance after `throughput_ah` of charge: r0 * (1 + alpha * sqrt(Ah)).
double apply_aging(const BatteryParams& params, double throughput_ah);

/// Fresh episode at rest. Aging (throughput_ah, r0) is carried over from
/// `previous`; pass a default-constructed state for a new cell.
BatteryState reset(const BatteryParams& params, double soc_start, double ambient,
                   const BatteryState& previous = {});

/// Ambient temperature for a zero-based episode index.
double ambient_at(const AmbientSchedule& schedule, int episode);

/// True when aging updates r0 at the start of `episode`.
bool aging_active(const AmbientSchedule& schedule, int episode);

}  // namespace fastcharge::battery
