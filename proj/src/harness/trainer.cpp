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

#include "fastcharge/harness/trainer.hpp"

#include <chrono>
#include <stdexcept>

#include "fastcharge/protocols/episode.hpp"
#include "fastcharge/td3/replay_buffer.hpp"

namespace fastcharge::harness {
namespace {

using Clock = std::chrono::steady_clock;

double micros_since(Clock::time_point start) {
  return std::chrono::duration<double, std::micro>(Clock::now() - start).count();
}

gp::KernelParams initial_kernel(const ExperimentConfig& c) {
  return {c.signal_variance, c.rbf_length_scale, c.white_noise};
}

}  // namespace

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::Plain: return "plain";
    case Mode::StaticSafe: return "static-safe";
    case Mode::AdaptiveSafe: return "adaptive-safe";
  }
  return "plain";
}

Mode mode_from_string(const std::string& name) {
  if (name == "plain") return Mode::Plain;
  if (name == "static-safe") return Mode::StaticSafe;
  if (name == "adaptive-safe") return Mode::AdaptiveSafe;
  throw std::invalid_argument("unknown mode '" + name + "'");
}

safety::StaticSafety fit_static_safety(const ExperimentConfig& config, const std::vector<Transition>& transitions,
                                       Rng& thin_rng, std::uint64_t restart_seed) {
  if (transitions.empty()) throw gp::GpError("no warmup data for the static surrogates");
  const auto n = static_cast<Eigen::Index>(transitions.size());
  Eigen::MatrixXd x_T(n, 3), x_V(n, 3);
  Eigen::VectorXd y_T(n), y_V(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& tr = transitions[static_cast<std::size_t>(i)];
    x_T.row(i) << tr.state.temperature, tr.state.prev_action, tr.action;
    x_V.row(i) << tr.state.voltage, tr.state.prev_action, tr.action;
    y_T(i) = tr.next_state.temperature - tr.state.temperature;
    y_V(i) = tr.next_state.voltage - tr.state.voltage;
  }
  // Both surrogates keep the same rows.
  Rng voltage_rng = thin_rng;
  gp::thin(x_T, y_T, config.gp_max_points, thin_rng);
  gp::thin(x_V, y_V, config.gp_max_points, voltage_rng);

  gp::FitOptions options;
  options.optimize = config.gp_optimize;
  options.restarts = config.gp_restarts;
  options.restart_seed = restart_seed;
  safety::StaticSafety s;
  s.temperature = gp::GpModel::fit(x_T, y_T, initial_kernel(config), options);
  s.voltage = gp::GpModel::fit(x_V, y_V, initial_kernel(config), options);
  s.temperature_limit = config.temperature_limit;
  s.voltage_limit = config.voltage_limit;
  s.kappa = config.kappa;
  return s;
}

TrainResult train(const ExperimentConfig& config, Mode mode, const StepObserver& observer) {
  validate(config);
  Rng master(config.seed);
  Rng init_rng(master.next_u64());
  Rng explore_rng(master.next_u64());
  Rng replay_rng(master.next_u64());
  Rng thin_rng(master.next_u64());
  const std::uint64_t restart_seed = master.next_u64();

  TrainResult result{mode, td3::Agent(td3::AgentConfig::from_experiment(config), init_rng), std::nullopt, {}, {}};
  td3::Agent& agent = result.agent;
  td3::ReplayBuffer replay(static_cast<std::size_t>(config.replay_capacity));
  std::vector<Transition> warmup_data;
  std::optional<safety::DynamicSafety> dynamic;
  if (mode == Mode::AdaptiveSafe) dynamic.emplace(initial_kernel(config), config.dynamic_min_points);

  const auto batch = static_cast<std::size_t>(config.batch_size);
  BatteryState carried;
  for (int e = 0; e < config.episodes; ++e) {
    const bool warmup = e < config.warmup_episodes;
    if (!warmup && mode != Mode::Plain && !result.safety) {
      result.safety = fit_static_safety(config, warmup_data, thin_rng, restart_seed);
      warmup_data = {};
    }
    const safety::StaticSafety* stat = !warmup && result.safety ? &*result.safety : nullptr;
    safety::DynamicSafety* dyn = !warmup && dynamic ? &*dynamic : nullptr;
    if (dyn != nullptr) dyn->reset_episode();
    const protocols::SafetyHooks hooks = protocols::make_hooks(config, stat, dyn);

    agent.begin_episode(e);
    protocols::Episode ep(config, e, carried);
    while (!ep.over()) {
      auto start = Clock::now();
      const double raw = warmup ? explore_rng.uniform(config.action.min, config.action.max)
                                : agent.select_action(ep.observation(), explore_rng, true);
      double rl_us = micros_since(start);

      const Transition tr = ep.advance(raw, hooks);
      if (warmup && mode != Mode::Plain) warmup_data.push_back(tr);
      replay.push(tr);

      start = Clock::now();
      if (replay.ready(batch)) agent.train(replay.sample(batch, replay_rng));
      rl_us += micros_since(start);
      ep.last_row().rl_us = rl_us;

      if (observer) observer({e, warmup, &ep.last_row(), &tr, stat, dyn});
    }
    carried = ep.cell();
    result.logs.push_back(ep.finish());
  }
  // A run made only of warmup episodes still hands back fitted surrogates.
  if (mode != Mode::Plain && !result.safety) {
    result.safety = fit_static_safety(config, warmup_data, thin_rng, restart_seed);
  }
  result.final_cell = carried;
  return result;
}

}  // namespace fastcharge::harness
