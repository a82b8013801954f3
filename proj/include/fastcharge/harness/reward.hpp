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

#include <algorithm>

namespace fastcharge {

/// -1 per step, plus linear penalties above the voltage and temperature limits.
inline double reward(double voltage, double temperature, double voltage_limit, double temperature_limit,
                     double lambda_voltage, double lambda_temperature) {
  return -1.0 - lambda_voltage * std::max(0.0, voltage - voltage_limit) -
         lambda_temperature * std::max(0.0, temperature - temperature_limit);
}

}  // namespace fastcharge
