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
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fastcharge/core/config.hpp"
#include "fastcharge/core/normalize.hpp"
#include "fastcharge/core/rng.hpp"
#include "fastcharge/mlp/adam.hpp"
#include "fastcharge/mlp/network.hpp"

namespace fastcharge::td3 {

struct AgentConfig {
  std::vector<int> hidden_layers = {128, 128};
  double actor_lr = 5e-4;
  double critic_lr = 5e-4;
  double gamma = 0.99;
  double tau = 0.006;
  double q_scale = 1.0;  // critic outputs are Q / q_scale
  int policy_delay = 2;
  double noise_std0 = 0.5477225575051661;  // sqrt(0.3)
  double noise_decay = 0.025;
  double noise_floor = 0.01;
  ActionBounds action;
  NormalizationBounds normalization;

  static AgentConfig from_experiment(const ExperimentConfig& config);
};

struct UpdateStats {
  double critic1_loss = 0.0;
  double critic2_loss = 0.0;
  std::optional<double> actor_loss;
};

/// Twin-critic deterministic actor-critic agent with delayed actor updates
/// and Polyak-averaged target networks. Network inputs are the normalized
/// AgentState rescaled to [-1, 1]. The actor maps it through tanh onto
/// [action.min, action.max]; critics take it with the rescaled action
/// appended.
class Agent {
 public:
  Agent(const AgentConfig& config, Rng& init_rng);

  /// Deterministic policy output in C-rate.
  double policy_action(const AgentState& s) const;

  /// Policy output plus N(0, noise_std) when exploring, clamped to the bounds.
  double select_action(const AgentState& s, Rng& rng, bool explore) const;

  /// y = r + gamma * (1 - done) * min(Q1'(s', mu'(s')), Q2'(s', mu'(s'))), in reward units.
  Eigen::VectorXd critic_targets(std::span<const Transition> batch) const;

  /// One Adam step per critic on the mean squared TD error. Returns the
  /// losses measured before the step.
  std::pair<double, double> update_critics(std::span<const Transition> batch);

  /// When step % policy_delay == 0: one actor step ascending mean
  /// Q1(s, mu(s)) followed by the Polyak update of all target networks.
  /// Returns the actor loss (-mean Q1) when the update ran.
  std::optional<double> update_actor_and_targets(std::span<const Transition> batch,
                                                 std::int64_t step);

  /// Critic update followed by the delayed actor update, using an internal
  /// update counter.
  UpdateStats train(std::span<const Transition> batch);

  /// Exploration std for a zero-based episode index.
  static double noise_schedule(const AgentConfig& config, int episode);
  void begin_episode(int episode) { noise_std_ = noise_schedule(config_, episode); }
  double noise_std() const { return noise_std_; }
  void set_noise_std(double s) { noise_std_ = s; }

  const AgentConfig& config() const { return config_; }
  const Normalizer& normalizer() const { return normalizer_; }
  std::int64_t update_count() const { return update_count_; }

  mlp::Network& actor() { return actor_; }
  mlp::Network& actor_target() { return actor_target_; }
  mlp::Network& critic1() { return critic1_; }
  mlp::Network& critic2() { return critic2_; }
  mlp::Network& critic1_target() { return critic1_target_; }
  mlp::Network& critic2_target() { return critic2_target_; }
  const mlp::Network& actor() const { return actor_; }
  const mlp::Network& actor_target() const { return actor_target_; }
  const mlp::Network& critic1() const { return critic1_; }
  const mlp::Network& critic2() const { return critic2_; }
  const mlp::Network& critic1_target() const { return critic1_target_; }
  const mlp::Network& critic2_target() const { return critic2_target_; }

  /// Swaps the roles of the two critics (and their targets and optimizers).
  void swap_critics();

  bool operator==(const Agent& other) const;

  nlohmann::json to_json() const;
  static Agent from_json(const nlohmann::json& j);

 private:
  Agent() = default;

  Eigen::MatrixXd state_matrix(std::span<const Transition> batch, bool next) const;
  Eigen::MatrixXd critic_input(const Eigen::MatrixXd& states, const Eigen::RowVectorXd& action01) const;
  Eigen::RowVectorXd action01_from_tanh(const Eigen::MatrixXd& out) const;

  AgentConfig config_;
  Normalizer normalizer_;
  mlp::Network actor_, actor_target_;
  mlp::Network critic1_, critic2_, critic1_target_, critic2_target_;
  mlp::AdamState actor_opt_, critic1_opt_, critic2_opt_;
  double noise_std_ = 0.0;
  std::int64_t update_count_ = 0;
};

}  // namespace fastcharge::td3
