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
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fastcharge/core/params.hpp"
#include "fastcharge/core/types.hpp"

namespace fastcharge {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every knob of a training/evaluation run. Defaults reproduce the
/// fixed-condition study; varying_condition_config() gives the drift study.
struct ExperimentConfig {
  // Agent hyperparameters.
  double actor_lr = 5e-4;
  double critic_lr = 5e-4;
  int batch_size = 64;
  double gamma = 0.99;
  double tau = 0.006;              // target mixing weight
  double q_scale = 100.0;          // critics regress Q / q_scale
  double noise_variance = 0.3;     // initial exploration variance (C-rate^2)
  double noise_decay = 0.025;      // linear decrement of the std per episode
  double noise_floor = 0.01;
  int policy_delay = 2;
  int replay_capacity = 100000;
  std::vector<int> hidden_layers = {128, 128};

  // Constraint surrogates.
  double rbf_length_scale = 1.0;
  double white_noise = 1e-5;
  double signal_variance = 1.0;
  bool gp_optimize = true;
  int gp_restarts = 3;
  int gp_max_points = 512;
  int dynamic_min_points = 3;
  double kappa = 3.0;
  int projection_start = 0;        // steps t <= projection_start run unprojected
  int projection_grid = 256;
  double projection_tolerance = 1e-4;

  // Charging problem.
  ActionBounds action{0.05, 4.5};
  double dt = 10.0;
  double temperature_limit = 45.0;
  double voltage_limit = 4.3;
  double soc_start = 0.1;
  double soc_target = 0.8;
  double lambda_voltage = 15.0;
  double lambda_temperature = 20.0;
  int warmup_episodes = 5;
  int max_steps = 300;
  int episodes = 150;

  NormalizationBounds normalization;
  BatteryParams battery;
  AmbientSchedule ambient;
  CccvParams cccv;

  std::uint64_t seed = 1;

  bool operator==(const ExperimentConfig&) const = default;
};

ExperimentConfig fixed_condition_config();
ExperimentConfig varying_condition_config();

/// Throws ConfigError describing the first inconsistency found.
void validate(const ExperimentConfig& config);

nlohmann::json to_json(const ExperimentConfig& config);

/// Missing keys keep their defaults. An optional top-level
/// `"study": "fixed" | "varying"` picks which defaults the overrides apply to.
/// Unknown keys are rejected.
ExperimentConfig config_from_json(const nlohmann::json& j);

ExperimentConfig load_config(const std::filesystem::path& path);
void save_config(const ExperimentConfig& config, const std::filesystem::path& path);

}  // namespace fastcharge
