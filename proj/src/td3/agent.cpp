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

#include "fastcharge/td3/agent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fastcharge::td3 {
namespace {

constexpr double kFinalActorScale = 1e-2;

std::vector<int> dims(int in, const std::vector<int>& hidden, int out) {
  std::vector<int> d{in};
  d.insert(d.end(), hidden.begin(), hidden.end());
  d.push_back(out);
  return d;
}

nlohmann::json config_json(const AgentConfig& c) {
  return {{"hidden_layers", c.hidden_layers},
          {"actor_lr", c.actor_lr},
          {"critic_lr", c.critic_lr},
          {"gamma", c.gamma},
          {"tau", c.tau},
          {"q_scale", c.q_scale},
          {"policy_delay", c.policy_delay},
          {"noise_std0", c.noise_std0},
          {"noise_decay", c.noise_decay},
          {"noise_floor", c.noise_floor},
          {"action_min", c.action.min},
          {"action_max", c.action.max},
          {"voltage_min", c.normalization.voltage_min},
          {"voltage_max", c.normalization.voltage_max},
          {"temperature_min", c.normalization.temperature_min},
          {"temperature_max", c.normalization.temperature_max}};
}

AgentConfig config_from(const nlohmann::json& j) {
  AgentConfig c;
  c.hidden_layers = j.at("hidden_layers").get<std::vector<int>>();
  c.actor_lr = j.at("actor_lr").get<double>();
  c.critic_lr = j.at("critic_lr").get<double>();
  c.gamma = j.at("gamma").get<double>();
  c.tau = j.at("tau").get<double>();
  c.q_scale = j.value("q_scale", 1.0);
  c.policy_delay = j.at("policy_delay").get<int>();
  c.noise_std0 = j.at("noise_std0").get<double>();
  c.noise_decay = j.at("noise_decay").get<double>();
  c.noise_floor = j.at("noise_floor").get<double>();
  c.action = {j.at("action_min").get<double>(), j.at("action_max").get<double>()};
  c.normalization = {j.at("voltage_min").get<double>(), j.at("voltage_max").get<double>(),
                     j.at("temperature_min").get<double>(), j.at("temperature_max").get<double>()};
  return c;
}

}  // namespace

AgentConfig AgentConfig::from_experiment(const ExperimentConfig& e) {
  AgentConfig c;
  c.hidden_layers = e.hidden_layers;
  c.actor_lr = e.actor_lr;
  c.critic_lr = e.critic_lr;
  c.gamma = e.gamma;
  c.tau = e.tau;
  c.q_scale = e.q_scale;
  c.policy_delay = e.policy_delay;
  c.noise_std0 = std::sqrt(e.noise_variance);
  c.noise_decay = e.noise_decay;
  c.noise_floor = e.noise_floor;
  c.action = e.action;
  c.normalization = e.normalization;
  return c;
}

Agent::Agent(const AgentConfig& config, Rng& init_rng)
    : config_(config), normalizer_(config.normalization, config.action) {
  if (config.policy_delay < 1) throw std::invalid_argument("policy_delay must be >= 1");
  if (!(config.q_scale > 0)) throw std::invalid_argument("q_scale must be positive");
  using mlp::OutputActivation;
  actor_ = mlp::Network::random(dims(4, config.hidden_layers, 1), OutputActivation::Tanh, init_rng,
                                kFinalActorScale);
  critic1_ = mlp::Network::random(dims(5, config.hidden_layers, 1), OutputActivation::Identity, init_rng);
  critic2_ = mlp::Network::random(dims(5, config.hidden_layers, 1), OutputActivation::Identity, init_rng);
  actor_target_ = actor_;
  critic1_target_ = critic1_;
  critic2_target_ = critic2_;
  actor_opt_ = mlp::AdamState::for_network(actor_, config.actor_lr);
  critic1_opt_ = mlp::AdamState::for_network(critic1_, config.critic_lr);
  critic2_opt_ = mlp::AdamState::for_network(critic2_, config.critic_lr);
  noise_std_ = noise_schedule(config, 0);
}

double Agent::noise_schedule(const AgentConfig& c, int episode) {
  return std::max(c.noise_floor, c.noise_std0 - c.noise_decay * episode);
}

double Agent::policy_action(const AgentState& s) const {
  const auto v = normalizer_.normalize(s);
  const Eigen::Vector4d x(2 * v[0] - 1, 2 * v[1] - 1, 2 * v[2] - 1, 2 * v[3] - 1);
  const double out = actor_.forward(x)(0);
  return config_.action.clamp(normalizer_.denormalize_action(0.5 * (out + 1.0)));
}

double Agent::select_action(const AgentState& s, Rng& rng, bool explore) const {
  const double a = policy_action(s);
  if (!explore || noise_std_ <= 0.0) return a;
  return config_.action.clamp(a + noise_std_ * rng.normal());
}

Eigen::MatrixXd Agent::state_matrix(std::span<const Transition> batch, bool next) const {
  Eigen::MatrixXd x(4, static_cast<Eigen::Index>(batch.size()));
  for (std::size_t j = 0; j < batch.size(); ++j) {
    const auto v = normalizer_.normalize(next ? batch[j].next_state : batch[j].state);
    for (int r = 0; r < 4; ++r) x(r, static_cast<Eigen::Index>(j)) = 2 * v[static_cast<std::size_t>(r)] - 1;
  }
  return x;
}

Eigen::MatrixXd Agent::critic_input(const Eigen::MatrixXd& states,
                                    const Eigen::RowVectorXd& action01) const {
  Eigen::MatrixXd x(5, states.cols());
  x.topRows(4) = states;
  x.row(4) = 2 * action01.array() - 1;
  return x;
}

Eigen::RowVectorXd Agent::action01_from_tanh(const Eigen::MatrixXd& out) const {
  return 0.5 * (out.row(0).array() + 1.0);
}

Eigen::VectorXd Agent::critic_targets(std::span<const Transition> batch) const {
  if (batch.empty()) throw std::invalid_argument("critic_targets: empty batch");
  const Eigen::MatrixXd next = state_matrix(batch, true);
  const Eigen::RowVectorXd next_action = action01_from_tanh(actor_target_.forward_batch(next));
  const Eigen::MatrixXd input = critic_input(next, next_action);
  const Eigen::RowVectorXd q1 = critic1_target_.forward_batch(input).row(0);
  const Eigen::RowVectorXd q2 = critic2_target_.forward_batch(input).row(0);
  Eigen::VectorXd y(static_cast<Eigen::Index>(batch.size()));
  for (Eigen::Index j = 0; j < y.size(); ++j) {
    const auto& t = batch[static_cast<std::size_t>(j)];
    const double bootstrap = t.done ? 0.0 : config_.gamma * config_.q_scale * std::min(q1(j), q2(j));
    y(j) = t.reward + bootstrap;
  }
  return y;
}

std::pair<double, double> Agent::update_critics(std::span<const Transition> batch) {
  const Eigen::VectorXd y = critic_targets(batch);
  const Eigen::MatrixXd states = state_matrix(batch, false);
  Eigen::RowVectorXd actions(states.cols());
  for (Eigen::Index j = 0; j < actions.size(); ++j) {
    actions(j) = normalizer_.normalize_action(batch[static_cast<std::size_t>(j)].action);
  }
  const Eigen::MatrixXd input = critic_input(states, actions);
  const double n = static_cast<double>(batch.size());

  auto step_critic = [&](mlp::Network& critic, mlp::AdamState& opt) {
    mlp::Network::Trace trace;
    const Eigen::RowVectorXd q = critic.forward_batch(input, trace).row(0);
    const Eigen::RowVectorXd diff = q - y.transpose() / config_.q_scale;
    const double loss = diff.squaredNorm() / n;
    const Eigen::MatrixXd upstream = (2.0 / n) * diff;
    mlp::adam_step(critic, critic.backward(trace, upstream), opt);
    return loss;
  };
  const double loss1 = step_critic(critic1_, critic1_opt_);
  const double loss2 = step_critic(critic2_, critic2_opt_);
  return {loss1, loss2};
}

std::optional<double> Agent::update_actor_and_targets(std::span<const Transition> batch,
                                                      std::int64_t step) {
  if (step % config_.policy_delay != 0) return std::nullopt;
  const Eigen::MatrixXd states = state_matrix(batch, false);
  const double n = static_cast<double>(batch.size());

  mlp::Network::Trace actor_trace;
  const Eigen::MatrixXd out = actor_.forward_batch(states, actor_trace);
  const Eigen::MatrixXd input = critic_input(states, action01_from_tanh(out));
  mlp::Network::Trace critic_trace;
  const Eigen::RowVectorXd q = critic1_.forward_batch(input, critic_trace).row(0);
  const double loss = -q.mean();

  // d(-mean Q)/dQ = -1/n; chain through a01 = (tanh_out + 1) / 2.
  const Eigen::MatrixXd dq = Eigen::MatrixXd::Constant(1, states.cols(), -1.0 / n);
  const auto critic_grads = critic1_.backward(critic_trace, dq);
  const Eigen::MatrixXd actor_upstream = 0.5 * critic_grads.input.row(4);
  mlp::adam_step(actor_, actor_.backward(actor_trace, actor_upstream), actor_opt_);

  actor_target_.soft_update_from(actor_, config_.tau);
  critic1_target_.soft_update_from(critic1_, config_.tau);
  critic2_target_.soft_update_from(critic2_, config_.tau);
  return loss;
}

UpdateStats Agent::train(std::span<const Transition> batch) {
  UpdateStats stats;
  std::tie(stats.critic1_loss, stats.critic2_loss) = update_critics(batch);
  ++update_count_;
  stats.actor_loss = update_actor_and_targets(batch, update_count_);
  return stats;
}

void Agent::swap_critics() {
  std::swap(critic1_, critic2_);
  std::swap(critic1_target_, critic2_target_);
  std::swap(critic1_opt_, critic2_opt_);
}

bool Agent::operator==(const Agent& o) const {
  return actor_ == o.actor_ && actor_target_ == o.actor_target_ && critic1_ == o.critic1_ &&
         critic2_ == o.critic2_ && critic1_target_ == o.critic1_target_ &&
         critic2_target_ == o.critic2_target_ && noise_std_ == o.noise_std_ &&
         update_count_ == o.update_count_ && actor_opt_.step == o.actor_opt_.step &&
         critic1_opt_.step == o.critic1_opt_.step && critic2_opt_.step == o.critic2_opt_.step;
}

nlohmann::json Agent::to_json() const {
  return {{"config", config_json(config_)},
          {"actor", actor_.to_json()},
          {"actor_target", actor_target_.to_json()},
          {"critic1", critic1_.to_json()},
          {"critic2", critic2_.to_json()},
          {"critic1_target", critic1_target_.to_json()},
          {"critic2_target", critic2_target_.to_json()},
          {"actor_optimizer", actor_opt_.to_json()},
          {"critic1_optimizer", critic1_opt_.to_json()},
          {"critic2_optimizer", critic2_opt_.to_json()},
          {"noise_std", noise_std_},
          {"update_count", update_count_}};
}

Agent Agent::from_json(const nlohmann::json& j) {
  Agent a;
  a.config_ = config_from(j.at("config"));
  a.normalizer_ = Normalizer(a.config_.normalization, a.config_.action);
  a.actor_ = mlp::Network::from_json(j.at("actor"));
  a.actor_target_ = mlp::Network::from_json(j.at("actor_target"));
  a.critic1_ = mlp::Network::from_json(j.at("critic1"));
  a.critic2_ = mlp::Network::from_json(j.at("critic2"));
  a.critic1_target_ = mlp::Network::from_json(j.at("critic1_target"));
  a.critic2_target_ = mlp::Network::from_json(j.at("critic2_target"));
  a.actor_opt_ = mlp::AdamState::from_json(j.at("actor_optimizer"));
  a.critic1_opt_ = mlp::AdamState::from_json(j.at("critic1_optimizer"));
  a.critic2_opt_ = mlp::AdamState::from_json(j.at("critic2_optimizer"));
  a.noise_std_ = j.at("noise_std").get<double>();
  a.update_count_ = j.at("update_count").get<std::int64_t>();
  return a;
}

}  // namespace fastcharge::td3
