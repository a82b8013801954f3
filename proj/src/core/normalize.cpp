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

#include "fastcharge/core/normalize.hpp"

namespace fastcharge {

Normalizer::Normalizer(const NormalizationBounds& bounds, const ActionBounds& action)
    : bounds_(bounds), action_(action) {}

std::array<double, 4> Normalizer::normalize(const AgentState& s) const {
  const auto& b = bounds_;
  return {s.soc,
          (s.voltage - b.voltage_min) / (b.voltage_max - b.voltage_min),
          (s.temperature - b.temperature_min) / (b.temperature_max - b.temperature_min),
          s.prev_action / action_.max};
}

AgentState Normalizer::denormalize(const std::array<double, 4>& v) const {
  const auto& b = bounds_;
  return {v[0],
          b.voltage_min + v[1] * (b.voltage_max - b.voltage_min),
          b.temperature_min + v[2] * (b.temperature_max - b.temperature_min),
          v[3] * action_.max};
}

}  // namespace fastcharge
