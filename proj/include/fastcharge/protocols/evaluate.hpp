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
#include <vector>

#include "fastcharge/core/config.hpp"
#include "fastcharge/protocols/episode_log.hpp"
#include "fastcharge/safety/safety_layer.hpp"

namespace fastcharge::protocols {

using Policy = std::function<double(const AgentState&)>;

struct EvaluateOptions {
  int episodes = 1;
  int start_episode = 0;        // schedule index of the first episode
  double throughput_ah = 0.0;   // charge already passed through the cell
  const safety::StaticSafety* safety = nullptr;
  bool adaptive = false;        // add residual GPs on top of `safety`
};

/// Greedy rollouts of `policy`; deterministic for a given config.
std::vector<EpisodeLog> evaluate(const ExperimentConfig& config, const Policy& policy,
                                 const EvaluateOptions& options);

Policy cccv_policy(const ExperimentConfig& config);

}  // namespace fastcharge::protocols
