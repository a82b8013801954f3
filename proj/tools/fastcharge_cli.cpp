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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "fastcharge/harness/checkpoint.hpp"
#include "fastcharge/harness/trainer.hpp"
#include "fastcharge/protocols/evaluate.hpp"
#include "fastcharge/verify/gp_oracle.hpp"
#include "fastcharge/verify/gradient_check.hpp"

namespace fs = std::filesystem;
using namespace fastcharge;

namespace {

constexpr int kRuntimeFailure = 1;
constexpr int kUsageError = 2;

// Bad input files map to the usage exit code.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ExperimentConfig read_config(const std::string& path) {
  try {
    return load_config(path);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

void print_summary(const std::string& label, const std::vector<protocols::EpisodeLog>& logs) {
  int violations = 0, finished = 0;
  double steps = 0.0, reward = 0.0;
  for (const auto& log : logs) {
    violations += log.metrics.violations();
    finished += log.metrics.finished() ? 1 : 0;
    steps += log.metrics.steps;
    reward += log.metrics.cumulative_reward;
  }
  const double n = logs.empty() ? 1.0 : static_cast<double>(logs.size());
  const auto& last = logs.back().metrics;
  std::printf("%s episodes=%zu finished=%d mean_steps=%.2f mean_reward=%.3f violation_steps=%d "
              "last_charge_min=%.2f last_max_T=%.3f last_max_V=%.4f\n",
              label.c_str(), logs.size(), finished, steps / n, reward / n, violations, last.charge_minutes,
              last.max_T, last.max_V);
}

int cmd_train(const std::string& mode_name, const std::string& config_path, const std::string& out) {
  const auto config = read_config(config_path);
  const auto mode = harness::mode_from_string(mode_name);
  const auto result = harness::train(config, mode);
  protocols::write_logs(result.logs, out);
  harness::save_checkpoint(fs::path(out) / "checkpoint.json", mode, result.agent, result.safety);
  save_config(config, fs::path(out) / "config.json");
  print_summary("train mode=" + mode_name, result.logs);
  return 0;
}

int cmd_evaluate(const std::string& checkpoint_path, const std::string& config_path, int episodes,
                 int start_episode, double throughput, const std::string& out) {
  if (!fs::is_regular_file(checkpoint_path)) throw UsageError("checkpoint not found: " + checkpoint_path);
  const auto config = read_config(config_path);
  harness::Checkpoint cp = [&] {
    try {
      return harness::load_checkpoint(checkpoint_path);
    } catch (const std::exception& e) {
      throw UsageError(e.what());
    }
  }();
  protocols::EvaluateOptions options;
  options.episodes = episodes;
  options.start_episode = start_episode;
  options.throughput_ah = throughput;
  options.safety = cp.safety ? &*cp.safety : nullptr;
  options.adaptive = cp.mode == harness::Mode::AdaptiveSafe;
  const auto& agent = cp.agent;
  const auto logs = protocols::evaluate(config, [&](const AgentState& s) { return agent.policy_action(s); }, options);
  protocols::write_logs(logs, out);
  print_summary("evaluate mode=" + harness::to_string(cp.mode), logs);
  return 0;
}

int cmd_cccv(const std::string& config_path, int episodes, int start_episode, double throughput,
             const std::string& out) {
  const auto config = read_config(config_path);
  protocols::EvaluateOptions options;
  options.episodes = episodes;
  options.start_episode = start_episode;
  options.throughput_ah = throughput;
  const auto logs = protocols::evaluate(config, protocols::cccv_policy(config), options);
  protocols::write_logs(logs, out);
  print_summary("baseline-cccv", logs);
  return 0;
}

int cmd_gp_check(const std::string& out) {
  constexpr double kOracleTol = 1e-8;
  constexpr double kGradTol = 1e-4;
  const auto oracle = verify::gp_oracle_suite(50, 20260101);
  const auto actor = verify::gradient_check_shape({4, 128, 128, 1}, mlp::OutputActivation::Tanh, 11);
  const auto critic = verify::gradient_check_shape({5, 128, 128, 1}, mlp::OutputActivation::Identity, 12);
  const bool oracle_ok = oracle.max_error() < kOracleTol;
  const bool actor_ok = actor.max_relative_error < kGradTol;
  const bool critic_ok = critic.max_relative_error < kGradTol;

  std::printf("%s gp-oracle datasets=%d max_rel_err=%.3e\n", oracle_ok ? "PASS" : "FAIL", oracle.datasets,
              oracle.max_error());
  std::printf("%s gradient 4-128-128-1 checked=%zu max_rel_err=%.3e\n", actor_ok ? "PASS" : "FAIL", actor.checked,
              actor.max_relative_error);
  std::printf("%s gradient 5-128-128-1 checked=%zu max_rel_err=%.3e\n", critic_ok ? "PASS" : "FAIL",
              critic.checked, critic.max_relative_error);

  fs::create_directories(out);
  const nlohmann::json report = {
      {"gp_oracle", {{"datasets", oracle.datasets},
                     {"max_mean_error", oracle.max_mean_error},
                     {"max_var_error", oracle.max_var_error},
                     {"max_lml_error", oracle.max_lml_error},
                     {"pass", oracle_ok}}},
      {"gradient_actor", {{"checked", actor.checked}, {"skipped", actor.skipped},
                          {"max_relative_error", actor.max_relative_error}, {"pass", actor_ok}}},
      {"gradient_critic", {{"checked", critic.checked}, {"skipped", critic.skipped},
                           {"max_relative_error", critic.max_relative_error}, {"pass", critic_ok}}}};
  std::ofstream(fs::path(out) / "gp_check.json") << report.dump(2) << '\n';
  return oracle_ok && actor_ok && critic_ok ? 0 : kRuntimeFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Safe reinforcement learning for battery fast charging"};
  app.require_subcommand(1);

  std::string mode, config, out, checkpoint;
  int episodes = 1, start_episode = 0;
  double throughput = 0.0;

  auto* train = app.add_subcommand("train", "train an agent");
  train->add_option("--mode", mode, "plain | static-safe | adaptive-safe")
      ->required()
      ->check(CLI::IsMember({"plain", "static-safe", "adaptive-safe"}));
  train->add_option("--config", config)->required();
  train->add_option("--out", out)->required();

  auto* eval = app.add_subcommand("evaluate", "greedy rollouts of a trained checkpoint");
  eval->add_option("--checkpoint", checkpoint)->required();
  eval->add_option("--config", config)->required();
  eval->add_option("--episodes", episodes)->required()->check(CLI::PositiveNumber);
  eval->add_option("--start-episode", start_episode, "schedule index of the first episode")->check(CLI::NonNegativeNumber);
  eval->add_option("--throughput-ah", throughput, "charge already passed through the cell")->check(CLI::NonNegativeNumber);
  eval->add_option("--out", out)->required();

  auto* cccv = app.add_subcommand("baseline-cccv", "run the CCCV protocol");
  cccv->add_option("--config", config)->required();
  cccv->add_option("--episodes", episodes)->check(CLI::PositiveNumber);
  cccv->add_option("--start-episode", start_episode)->check(CLI::NonNegativeNumber);
  cccv->add_option("--throughput-ah", throughput)->check(CLI::NonNegativeNumber);
  cccv->add_option("--out", out)->required();

  auto* check = app.add_subcommand("gp-check", "GP oracle and gradient check suites");
  check->add_option("--out", out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (*train) return cmd_train(mode, config, out);
    if (*eval) return cmd_evaluate(checkpoint, config, episodes, start_episode, throughput, out);
    if (*cccv) return cmd_cccv(config, episodes, start_episode, throughput, out);
    return cmd_gp_check(out);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeFailure;
  }
}
