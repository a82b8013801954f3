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

#include "fastcharge/protocols/evaluate.hpp"

#include <optional>

#include "fastcharge/battery/battery.hpp"
#include "fastcharge/protocols/cccv.hpp"
#include "fastcharge/protocols/episode.hpp"

namespace fastcharge::protocols {

std::vector<EpisodeLog> evaluate(const ExperimentConfig& config, const Policy& policy,
                                 const EvaluateOptions& options) {
  validate(config);
  if (options.adaptive && options.safety == nullptr) {
    throw std::invalid_argument("adaptive evaluation needs a static safety layer");
  }
  std::optional<safety::DynamicSafety> dynamic;
  if (options.adaptive) {
    dynamic.emplace(gp::KernelParams{config.signal_variance, config.rbf_length_scale, config.white_noise},
                    config.dynamic_min_points);
  }
  const SafetyHooks hooks = make_hooks(config, options.safety, dynamic ? &*dynamic : nullptr);

  BatteryState carried;
  carried.throughput_ah = options.throughput_ah;
  std::vector<EpisodeLog> logs;
  for (int i = 0; i < options.episodes; ++i) {
    if (dynamic) dynamic->reset_episode();
    Episode ep(config, options.start_episode + i, carried);
    while (!ep.over()) ep.advance(policy(ep.observation()), hooks);
    carried = ep.cell();
    logs.push_back(ep.finish());
  }
  return logs;
}

Policy cccv_policy(const ExperimentConfig& config) {
  return [config](const AgentState& s) {
    BatteryState cell;
    cell.soc = s.soc;
    cell.voltage = s.voltage;
    cell.temperature = s.temperature;
    return cccv_action(cell, config.cccv, config.battery.capacity_ah, config.action);
  };
}

}  // namespace fastcharge::protocols
