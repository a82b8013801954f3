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
#include <optional>
#include <string>
#include <vector>

#include "fastcharge/core/config.hpp"
#include "fastcharge/protocols/episode_log.hpp"
#include "fastcharge/safety/safety_layer.hpp"
#include "fastcharge/td3/agent.hpp"

namespace fastcharge::harness {

enum class Mode { Plain, StaticSafe, AdaptiveSafe };

std::string to_string(Mode mode);
/// "plain", "static-safe" or "adaptive-safe"; throws std::invalid_argument otherwise.
Mode mode_from_string(const std::string& name);

/// Snapshot handed to a StepObserver after every executed step.
struct StepContext {
  int episode = 0;
  bool warmup = false;
  const protocols::StepRecord* row = nullptr;
  const Transition* transition = nullptr;
  const safety::StaticSafety* stat = nullptr;      // null in plain mode and during warmup
  const safety::DynamicSafety* dynamic = nullptr;  // adaptive mode only
};

using StepObserver = std::function<void(const StepContext&)>;

struct TrainResult {
  Mode mode;
  td3::Agent agent;
  std::optional<safety::StaticSafety> safety;
  std::vector<protocols::EpisodeLog> logs;
  BatteryState final_cell;  // carries the accumulated aging
};

/// Random-action warmup for the first warmup_episodes, then policy plus
/// exploration noise. Safe modes fit the static surrogates at the end of the
/// warmup and project every later action; the adaptive mode also refits the
/// residual surrogates within each episode. Validates the config first.
TrainResult train(const ExperimentConfig& config, Mode mode, const StepObserver& observer = {});

inline TrainResult train_plain(const ExperimentConfig& c) { return train(c, Mode::Plain); }
inline TrainResult train_static(const ExperimentConfig& c) { return train(c, Mode::StaticSafe); }
inline TrainResult train_adaptive(const ExperimentConfig& c) { return train(c, Mode::AdaptiveSafe); }

/// Fits both static surrogates on (z_t, a_prev, a_t) -> z_{t+1} - z_t rows taken
/// from `transitions`, thinned to config.gp_max_points.
safety::StaticSafety fit_static_safety(const ExperimentConfig& config, const std::vector<Transition>& transitions,
                                       Rng& thin_rng, std::uint64_t restart_seed);

}  // namespace fastcharge::harness
