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

namespace fastcharge::protocols {

/// Constant current until the terminal voltage reaches cv_voltage, then a
/// proportional controller on the voltage error. The CV current never drops
/// below max(action.min, termination_current).
double cccv_action(const BatteryState& state, const CccvParams& p, double capacity_ah,
                   const ActionBounds& action);

}  // namespace fastcharge::protocols
