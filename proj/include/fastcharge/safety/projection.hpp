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

#include <functional>
#include <span>

#include "fastcharge/core/types.hpp"
#include "fastcharge/safety/safety_layer.hpp"

namespace fastcharge::safety {

struct ProjectionSettings {
  ActionBounds action;
  int grid_points = 256;
  double tolerance = 1e-4;  // bisection stops below this interval width
};

struct ProjectionResult {
  double action = 0.0;
  bool was_projected = false;
  bool feasible = true;
  double predicted_T_uub = 0.0;
  double predicted_V_uub = 0.0;
  int evaluations = 0;  // candidate actions scored
};

struct ConstraintValues {
  double temperature_uub = 0.0;
  double voltage_uub = 0.0;
};

/// Scores a set of candidate actions at once.
using ConstraintFn = std::function<void(std::span<const double> actions, std::span<ConstraintValues> out)>;

/// Closest action to a_raw whose constraint values stay within the limits.
/// a_raw is returned untouched when it is already feasible. Otherwise a
/// uniform grid over the action bounds is searched, the feasible grid point
/// nearest to a_raw is refined by bisection toward a_raw, and the feasible
/// end of the final bracket is returned. With no feasible grid point the
/// result is action.min, flagged infeasible.
ProjectionResult project_action(double a_raw, const ConstraintFn& constraints, double temperature_limit,
                                double voltage_limit, const ProjectionSettings& settings);

/// Projection against the GP surrogates evaluated at [z, a_prev, candidate].
/// With `dynamic` the residual means are added (adaptive posterior).
/// Throws SafetyNotReady when the static GPs are missing.
ProjectionResult project(double a_raw, double z_temperature, double z_voltage, double a_prev,
                         const StaticSafety& stat, const DynamicSafety* dynamic,
                         const ProjectionSettings& settings);

/// The (T, V) upper bounds for a batch of candidates; used by project().
void surrogate_bounds(double z_temperature, double z_voltage, double a_prev, const StaticSafety& stat,
                      const DynamicSafety* dynamic, std::span<const double> actions,
                      std::span<ConstraintValues> out);

}  // namespace fastcharge::safety
