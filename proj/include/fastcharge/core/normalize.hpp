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

#include "fastcharge/core/params.hpp"
#include "fastcharge/core/types.hpp"

namespace fastcharge {

/// Affine map between physical AgentState values and network inputs in
/// [0, 1]. The previous action is scaled over [0, action.max] because the
/// first step of an episode has no prior current.
class Normalizer {
 public:
  Normalizer() = default;
  Normalizer(const NormalizationBounds& bounds, const ActionBounds& action);

  std::array<double, 4> normalize(const AgentState& s) const;
  AgentState denormalize(const std::array<double, 4>& v) const;

  double normalize_action(double a) const { return (a - action_.min) / (action_.max - action_.min); }
  double denormalize_action(double u) const {
    return u >= 1.0 ? action_.max : action_.min + u * (action_.max - action_.min);
  }

  const ActionBounds& action_bounds() const { return action_; }
  const NormalizationBounds& bounds() const { return bounds_; }

 private:
  NormalizationBounds bounds_;
  ActionBounds action_;
};

}  // namespace fastcharge
