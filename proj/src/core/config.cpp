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

#include "fastcharge/core/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace fastcharge {
namespace {

using nlohmann::json;

// One list of (key, member) pairs drives serialization, parsing and the
// unknown-key check, so the three cannot drift apart.
template <class Config, class F>
void visit_top(Config& c, F&& f) {
  f("actor_lr", c.actor_lr);
  f("critic_lr", c.critic_lr);
  f("batch_size", c.batch_size);
  f("gamma", c.gamma);
  f("tau", c.tau);
  f("q_scale", c.q_scale);
  f("noise_variance", c.noise_variance);
  f("noise_decay", c.noise_decay);
  f("noise_floor", c.noise_floor);
  f("policy_delay", c.policy_delay);
  f("replay_capacity", c.replay_capacity);
  f("hidden_layers", c.hidden_layers);
  f("rbf_length_scale", c.rbf_length_scale);
  f("white_noise", c.white_noise);
  f("signal_variance", c.signal_variance);
  f("gp_optimize", c.gp_optimize);
  f("gp_restarts", c.gp_restarts);
  f("gp_max_points", c.gp_max_points);
  f("dynamic_min_points", c.dynamic_min_points);
  f("kappa", c.kappa);
  f("projection_start", c.projection_start);
  f("projection_grid", c.projection_grid);
  f("projection_tolerance", c.projection_tolerance);
  f("action_min", c.action.min);
  f("action_max", c.action.max);
  f("dt", c.dt);
  f("temperature_limit", c.temperature_limit);
  f("voltage_limit", c.voltage_limit);
  f("soc_start", c.soc_start);
  f("soc_target", c.soc_target);
  f("lambda_voltage", c.lambda_voltage);
  f("lambda_temperature", c.lambda_temperature);
  f("warmup_episodes", c.warmup_episodes);
  f("max_steps", c.max_steps);
  f("episodes", c.episodes);
  f("seed", c.seed);
}

template <class P, class F>
void visit_battery(P& p, F&& f) {
  f("capacity_ah", p.capacity_ah);
  f("r0_initial", p.r0_initial);
  f("r1", p.r1);
  f("c1", p.c1);
  f("ocv_knots", p.ocv_knots);
  f("thermal_mass", p.thermal_mass);
  f("heat_transfer", p.heat_transfer);
  f("aging_alpha", p.aging_alpha);
  f("coulombic_eff", p.coulombic_eff);
}

template <class P, class F>
void visit_ambient(P& p, F&& f) {
  f("base_temp", p.base_temp);
  f("drift_start_episode", p.drift_start_episode);
  f("drift_increment", p.drift_increment);
  f("drift_cap", p.drift_cap);
  f("aging_enabled", p.aging_enabled);
}

template <class P, class F>
void visit_cccv(P& p, F&& f) {
  f("cc_rate", p.cc_rate);
  f("cv_voltage", p.cv_voltage);
  f("cv_gain", p.cv_gain);
  f("termination_current", p.termination_current);
}

template <class P, class F>
void visit_normalization(P& p, F&& f) {
  f("voltage_min", p.voltage_min);
  f("voltage_max", p.voltage_max);
  f("temperature_min", p.temperature_min);
  f("temperature_max", p.temperature_max);
}

template <class P, class Visit>
json write_block(P& p, Visit visit) {
  json out = json::object();
  visit(p, [&](const char* key, const auto& value) { out[key] = value; });
  return out;
}

template <class P, class Visit>
void read_block(const json& in, const std::string& where, P& p, Visit visit) {
  if (!in.is_object()) throw ConfigError(where + ": expected a JSON object");
  std::set<std::string> known;
  visit(p, [&](const char* key, auto& value) {
    known.insert(key);
    if (auto it = in.find(key); it != in.end()) {
      try {
        it->get_to(value);
      } catch (const json::exception& e) {
        throw ConfigError(where + "." + key + ": " + e.what());
      }
    }
  });
  for (const auto& [key, _] : in.items()) {
    if (!known.contains(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

constexpr auto kBattery = [](auto& p, auto&& f) { visit_battery(p, f); };
constexpr auto kAmbient = [](auto& p, auto&& f) { visit_ambient(p, f); };
constexpr auto kCccv = [](auto& p, auto&& f) { visit_cccv(p, f); };
constexpr auto kNorm = [](auto& p, auto&& f) { visit_normalization(p, f); };

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

}  // namespace

ExperimentConfig fixed_condition_config() { return ExperimentConfig{}; }

ExperimentConfig varying_condition_config() {
  ExperimentConfig c;
  c.actor_lr = 5e-5;
  c.dt = 15.0;
  c.voltage_limit = 4.4;
  c.episodes = 300;
  c.max_steps = 100;
  c.ambient = AmbientSchedule{10.0, 100, 0.145, 36.0, true};
  c.cccv = CccvParams{1.5, 4.3, 50.0, 0.05};
  return c;
}

void validate(const ExperimentConfig& c) {
  require(c.actor_lr > 0 && c.critic_lr > 0, "learning rates must be positive");
  require(c.q_scale > 0, "q_scale must be positive");
  require(c.batch_size >= 1, "batch_size must be >= 1");
  require(c.gamma >= 0 && c.gamma <= 1, "gamma must lie in [0, 1]");
  require(c.tau >= 0 && c.tau <= 1, "tau must lie in [0, 1]");
  require(c.noise_variance >= 0 && c.noise_decay >= 0 && c.noise_floor >= 0,
          "noise parameters must be non-negative");
  require(c.policy_delay >= 1, "policy_delay must be >= 1");
  require(c.replay_capacity >= c.batch_size, "replay_capacity must hold at least one batch");
  require(!c.hidden_layers.empty(), "hidden_layers must not be empty");
  for (int h : c.hidden_layers) require(h >= 1, "hidden layer widths must be >= 1");
  require(c.rbf_length_scale > 0 && c.white_noise > 0 && c.signal_variance > 0,
          "kernel parameters must be positive");
  require(c.gp_restarts >= 0, "gp_restarts must be >= 0");
  require(c.gp_max_points >= 2, "gp_max_points must be >= 2");
  require(c.dynamic_min_points >= 1, "dynamic_min_points must be >= 1");
  require(c.kappa > 0, "kappa must be positive");
  require(c.projection_start >= 0, "projection_start must be >= 0");
  require(c.projection_grid >= 2, "projection_grid must be >= 2");
  require(c.projection_tolerance > 0, "projection_tolerance must be positive");
  require(c.action.min > 0 && c.action.min < c.action.max, "need 0 < action_min < action_max");
  require(c.dt > 0, "dt must be positive");
  require(c.soc_start >= 0 && c.soc_start < c.soc_target && c.soc_target <= 1,
          "need 0 <= soc_start < soc_target <= 1");
  require(c.lambda_voltage >= 0 && c.lambda_temperature >= 0, "penalty weights must be >= 0");
  require(c.warmup_episodes >= 1, "warmup_episodes must be >= 1");
  require(c.episodes >= 1, "episodes must be >= 1");
  require(c.warmup_episodes <= c.episodes, "warmup_episodes exceeds episodes");
  require(c.max_steps >= 1, "max_steps must be >= 1");
  require(c.normalization.voltage_min < c.normalization.voltage_max &&
              c.normalization.temperature_min < c.normalization.temperature_max,
          "normalization ranges must be non-empty");

  const auto& b = c.battery;
  require(b.capacity_ah > 0 && b.r0_initial > 0 && b.r1 > 0 && b.c1 > 0 && b.thermal_mass > 0 &&
              b.heat_transfer > 0 && b.coulombic_eff > 0 && b.coulombic_eff <= 1,
          "battery parameters must be positive (coulombic_eff in (0, 1])");
  require(b.aging_alpha >= 0, "aging_alpha must be >= 0");
  require(b.ocv_knots.size() >= 2, "ocv_knots needs at least two knots");
  require(b.ocv_knots.front().first == 0.0 && b.ocv_knots.back().first == 1.0,
          "ocv_knots must span soc 0..1");
  for (std::size_t i = 1; i < b.ocv_knots.size(); ++i) {
    require(b.ocv_knots[i].first > b.ocv_knots[i - 1].first &&
                b.ocv_knots[i].second > b.ocv_knots[i - 1].second,
            "ocv_knots must be strictly increasing in soc and voltage");
  }

  require(c.ambient.drift_start_episode >= 0, "drift_start_episode must be >= 0");
  require(c.cccv.cv_voltage <= c.voltage_limit, "cccv.cv_voltage exceeds voltage_limit");
  require(c.action.contains(c.cccv.cc_rate), "cccv.cc_rate outside the action bounds");
  require(c.cccv.cv_gain > 0, "cccv.cv_gain must be positive");
}

json to_json(const ExperimentConfig& config) {
  json j = json::object();
  visit_top(config, [&](const char* key, const auto& value) { j[key] = value; });
  j["battery"] = write_block(config.battery, kBattery);
  j["ambient"] = write_block(config.ambient, kAmbient);
  j["cccv"] = write_block(config.cccv, kCccv);
  j["normalization"] = write_block(config.normalization, kNorm);
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  ExperimentConfig c;
  json body = j;
  if (auto it = body.find("study"); it != body.end()) {
    const std::string study = it->is_string() ? it->get<std::string>() : "";
    if (study == "fixed") {
      c = fixed_condition_config();
    } else if (study == "varying") {
      c = varying_condition_config();
    } else {
      throw ConfigError("config.study: expected \"fixed\" or \"varying\"");
    }
    body.erase("study");
  }
  json top = json::object();
  for (const auto& [key, value] : body.items()) {
    if (key == "battery") {
      read_block(value, "battery", c.battery, kBattery);
    } else if (key == "ambient") {
      read_block(value, "ambient", c.ambient, kAmbient);
    } else if (key == "cccv") {
      read_block(value, "cccv", c.cccv, kCccv);
    } else if (key == "normalization") {
      read_block(value, "normalization", c.normalization, kNorm);
    } else {
      top[key] = value;
    }
  }
  read_block(top, "config", c, [](auto& p, auto&& f) { visit_top(p, f); });
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("cannot parse " + path.string() + ": " + e.what());
  }
  auto config = config_from_json(j);
  validate(config);
  return config;
}

void save_config(const ExperimentConfig& config, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << to_json(config).dump(2) << '\n';
}

}  // namespace fastcharge
