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

#include "fastcharge/protocols/episode.hpp"

#include <chrono>
#include <limits>

#include "fastcharge/battery/battery.hpp"
#include "fastcharge/harness/reward.hpp"

namespace fastcharge::protocols {
namespace {

using Clock = std::chrono::steady_clock;

double micros_since(Clock::time_point start) {
  return std::chrono::duration<double, std::micro>(Clock::now() - start).count();
}

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

}  // namespace

SafetyHooks make_hooks(const ExperimentConfig& config, const safety::StaticSafety* stat,
                       safety::DynamicSafety* dynamic) {
  SafetyHooks h;
  h.stat = stat;
  h.dynamic = dynamic;
  h.projection_start = config.projection_start;
  h.settings.action = config.action;
  h.settings.grid_points = config.projection_grid;
  h.settings.tolerance = config.projection_tolerance;
  return h;
}

BatteryState episode_start(const ExperimentConfig& config, int episode, const BatteryState& previous) {
  BatteryState carried = previous;
  if (battery::aging_active(config.ambient, episode)) {
    carried.r0 = battery::apply_aging(config.battery, previous.throughput_ah);
  }
  return battery::reset(config.battery, config.soc_start, battery::ambient_at(config.ambient, episode), carried);
}

Episode::Episode(const ExperimentConfig& config, int episode, const BatteryState& previous)
    : config_(&config),
      episode_(episode),
      ambient_(battery::ambient_at(config.ambient, episode)),
      cell_(episode_start(config, episode, previous)),
      obs_{cell_.soc, cell_.voltage, cell_.temperature, 0.0} {
  rows_.reserve(static_cast<std::size_t>(config.max_steps));
}

Transition Episode::advance(double raw_action, const SafetyHooks& hooks) {
  const auto& cfg = *config_;
  StepRecord row;
  row.t = steps() + 1;
  row.ambient = ambient_;
  row.raw_action = raw_action;
  row.executed_action = cfg.action.clamp(raw_action);
  row.uub_T = row.uub_V = kNan;
  row.gp_mean_T = row.gp_mean_V = row.static_mean_T = row.static_mean_V = kNan;

  const double z_T = cell_.temperature;
  const double z_V = cell_.voltage;
  const double a_prev = obs_.prev_action;

  if (hooks.stat != nullptr && row.t > hooks.projection_start) {
    const auto start = Clock::now();
    const auto p = safety::project(row.executed_action, z_T, z_V, a_prev, *hooks.stat, hooks.dynamic, hooks.settings);
    row.proj_us = micros_since(start);
    row.executed_action = p.action;
    row.was_projected = p.was_projected;
    row.feasible = p.feasible;
    row.uub_T = p.predicted_T_uub;
    row.uub_V = p.predicted_V_uub;
  }
  const double action = row.executed_action;

  const Eigen::Vector3d x_T(z_T, a_prev, action);
  const Eigen::Vector3d x_V(z_V, a_prev, action);
  if (hooks.stat != nullptr) {
    const auto start = Clock::now();
    row.static_mean_T = safety::next_state_posterior(*hooks.stat->temperature, x_T).mean;
    row.static_mean_V = safety::next_state_posterior(*hooks.stat->voltage, x_V).mean;
    row.gp_mean_T = row.static_mean_T;
    row.gp_mean_V = row.static_mean_V;
    if (hooks.dynamic != nullptr) {
      if (const auto* m = hooks.dynamic->temperature.model()) row.gp_mean_T += m->posterior(x_T).mean;
      if (const auto* m = hooks.dynamic->voltage.model()) row.gp_mean_V += m->posterior(x_V).mean;
    }
    row.gp_us += micros_since(start);
  }

  cell_ = battery::step(cell_, action, cfg.dt, ambient_, cfg.battery);
  row.soc = cell_.soc;
  row.voltage = cell_.voltage;
  row.temperature = cell_.temperature;
  row.reward = reward(cell_.voltage, cell_.temperature, cfg.voltage_limit, cfg.temperature_limit,
                      cfg.lambda_voltage, cfg.lambda_temperature);

  if (hooks.stat != nullptr && hooks.dynamic != nullptr) {
    const auto start = Clock::now();
    hooks.dynamic->temperature.record(x_T, cell_.temperature, row.static_mean_T);
    hooks.dynamic->voltage.record(x_V, cell_.voltage, row.static_mean_V);
    row.gp_us += micros_since(start);
  }

  reached_ = cell_.soc >= cfg.soc_target;
  Transition tr;
  tr.state = obs_;
  tr.action = action;
  tr.reward = row.reward;
  obs_ = {cell_.soc, cell_.voltage, cell_.temperature, action};
  tr.next_state = obs_;
  tr.done = reached_;
  rows_.push_back(row);
  return tr;
}

EpisodeLog Episode::finish() const {
  EpisodeLog log;
  log.episode = episode_;
  log.rows = rows_;
  log.metrics = compute_metrics(rows_, reached_, *config_);
  return log;
}

}  // namespace fastcharge::protocols
