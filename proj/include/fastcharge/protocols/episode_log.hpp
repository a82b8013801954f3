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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fastcharge/core/config.hpp"

namespace fastcharge::protocols {

/// One executed step. Cell readings are taken after the step. Surrogate
/// columns are NaN when no safety layer is attached.
struct StepRecord {
  int t = 0;  // 1-based
  double soc = 0.0;
  double voltage = 0.0;
  double temperature = 0.0;
  double ambient = 0.0;
  double raw_action = 0.0;
  double executed_action = 0.0;
  bool was_projected = false;
  bool feasible = true;
  double uub_T = 0.0;
  double uub_V = 0.0;
  double gp_mean_T = 0.0;      // posterior mean used for the decision
  double gp_mean_V = 0.0;
  double static_mean_T = 0.0;  // static GP alone
  double static_mean_V = 0.0;
  double reward = 0.0;
  double rl_us = 0.0;
  double gp_us = 0.0;
  double proj_us = 0.0;
};

struct EpisodeMetrics {
  std::optional<int> steps_to_target;  // empty: did not finish
  int steps = 0;
  double charge_minutes = 0.0;
  double max_T = 0.0;
  double max_V = 0.0;
  int violation_steps_T = 0;
  int violation_steps_V = 0;
  double cumulative_reward = 0.0;

  bool finished() const { return steps_to_target.has_value(); }
  int violations() const { return violation_steps_T + violation_steps_V; }
};

struct EpisodeLog {
  int episode = 0;  // zero-based
  std::vector<StepRecord> rows;
  EpisodeMetrics metrics;
};

/// Metrics over the rows; violations are strict exceedances of the limits.
/// A did-not-finish episode is charged the full max_steps duration.
EpisodeMetrics compute_metrics(const std::vector<StepRecord>& rows, bool finished,
                               const ExperimentConfig& config);

/// Per-step CSV with the metrics appended as '#'-prefixed footer lines.
std::string episode_csv(const EpisodeLog& log);

/// episode,reward,steps,max_T,max_V,violations_T,violations_V
std::string summary_csv(const std::vector<EpisodeLog>& logs);

/// Writes summary.csv and episode_NNNN.csv files into dir (created if needed).
void write_logs(const std::vector<EpisodeLog>& logs, const std::filesystem::path& dir);

}  // namespace fastcharge::protocols
