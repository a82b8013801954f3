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

#include "fastcharge/core/config.hpp"
#include "fastcharge/core/types.hpp"
#include "fastcharge/protocols/episode_log.hpp"
#include "fastcharge/safety/projection.hpp"
#include "fastcharge/safety/safety_layer.hpp"

namespace fastcharge::protocols {

/// Safety layer wiring for a rollout. No static layer: actions run raw.
/// With `dynamic` the adaptive posterior is used and residuals are recorded
/// after every step.
struct SafetyHooks {
  const safety::StaticSafety* stat = nullptr;
  safety::DynamicSafety* dynamic = nullptr;
  int projection_start = 0;  // steps t <= projection_start are not projected
  safety::ProjectionSettings settings;
};

SafetyHooks make_hooks(const ExperimentConfig& config, const safety::StaticSafety* stat,
                       safety::DynamicSafety* dynamic);

/// Cell state at the start of `episode`: rested at the scheduled ambient,
/// with aging carried over from `previous`.
BatteryState episode_start(const ExperimentConfig& config, int episode, const BatteryState& previous);

/// One charging episode from soc_start until soc_target or max_steps.
class Episode {
 public:
  Episode(const ExperimentConfig& config, int episode, const BatteryState& previous);

  const AgentState& observation() const { return obs_; }
  const BatteryState& cell() const { return cell_; }
  double ambient() const { return ambient_; }
  int steps() const { return static_cast<int>(rows_.size()); }
  bool over() const { return reached_ || steps() >= config_->max_steps; }

  /// Projects raw_action when the hooks ask for it, executes it and logs the
  /// step. The returned transition carries the executed action; `done` is
  /// set only when soc_target is reached.
  Transition advance(double raw_action, const SafetyHooks& hooks);

  StepRecord& last_row() { return rows_.back(); }

  EpisodeLog finish() const;

 private:
  const ExperimentConfig* config_;
  int episode_;
  double ambient_;
  BatteryState cell_;
  AgentState obs_;
  bool reached_ = false;
  std::vector<StepRecord> rows_;
};

}  // namespace fastcharge::protocols
