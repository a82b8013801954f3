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

#include <cstdint>

#include "fastcharge/core/rng.hpp"
#include "fastcharge/safety/projection.hpp"
#include "fastcharge/safety/safety_layer.hpp"

namespace fastcharge::verify {

/// A static safety layer built from small random GPs plus the query it is
/// projected at.
struct ProjectionInstance {
  safety::StaticSafety stat;
  double z_temperature = 0.0;
  double z_voltage = 0.0;
  double a_prev = 0.0;
  double a_raw = 0.0;
};

ProjectionInstance random_projection_instance(Rng& rng, const ActionBounds& bounds);

struct DenseOracleResult {
  double action = 0.0;
  bool feasible = false;
};

/// Scores `points` evenly spaced actions and returns the feasible one
/// closest to a_raw (a_raw itself when feasible, lower action on ties).
DenseOracleResult dense_projection_oracle(const ProjectionInstance& inst, const ActionBounds& bounds,
                                          int points);

struct ProjectionOracleReport {
  int instances = 0;
  int feasible_instances = 0;
  int raw_feasible = 0;
  int flag_mismatches = 0;
  int unsound = 0;  // feasible results whose UUBs exceed a limit by more than 1e-6
  double max_action_error = 0.0;
};

ProjectionOracleReport projection_oracle_suite(int instances, std::uint64_t seed, int oracle_points,
                                               const safety::ProjectionSettings& settings);

}  // namespace fastcharge::verify
