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

#include "fastcharge/protocols/cccv.hpp"

#include <algorithm>

namespace fastcharge::protocols {

double cccv_action(const BatteryState& state, const CccvParams& p, double capacity_ah,
                   const ActionBounds& action) {
  if (state.voltage <= p.cv_voltage) return p.cc_rate;
  const double floor = std::max(action.min, p.termination_current);
  const double current = p.cc_rate - p.cv_gain * (state.voltage - p.cv_voltage) / capacity_ah;
  return std::clamp(current, std::min(floor, p.cc_rate), p.cc_rate);
}

}  // namespace fastcharge::protocols
