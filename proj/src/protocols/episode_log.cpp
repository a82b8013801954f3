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

#include "fastcharge/protocols/episode_log.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace fastcharge::protocols {
namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void append(std::string& line, const std::string& field) {
  if (!line.empty()) line += ',';
  line += field;
}

}  // namespace

EpisodeMetrics compute_metrics(const std::vector<StepRecord>& rows, bool finished,
                               const ExperimentConfig& config) {
  EpisodeMetrics m;
  m.steps = static_cast<int>(rows.size());
  if (finished) m.steps_to_target = m.steps;
  m.charge_minutes = (finished ? m.steps : config.max_steps) * config.dt / 60.0;
  m.max_T = rows.empty() ? std::numeric_limits<double>::quiet_NaN() : -std::numeric_limits<double>::infinity();
  m.max_V = m.max_T;
  for (const auto& r : rows) {
    m.max_T = std::max(m.max_T, r.temperature);
    m.max_V = std::max(m.max_V, r.voltage);
    if (r.temperature > config.temperature_limit) ++m.violation_steps_T;
    if (r.voltage > config.voltage_limit) ++m.violation_steps_V;
    m.cumulative_reward += r.reward;
  }
  return m;
}

std::string episode_csv(const EpisodeLog& log) {
  std::string out =
      "t,soc,V,T,ambient,raw_action,executed_action,was_projected,feasible,uub_T,uub_V,"
      "gp_mean_T,gp_mean_V,static_mean_T,static_mean_V,reward,rl_us,gp_us,proj_us\n";
  for (const auto& r : log.rows) {
    std::string line = std::to_string(r.t);
    for (double v : {r.soc, r.voltage, r.temperature, r.ambient, r.raw_action, r.executed_action}) {
      append(line, num(v));
    }
    append(line, r.was_projected ? "1" : "0");
    append(line, r.feasible ? "1" : "0");
    for (double v : {r.uub_T, r.uub_V, r.gp_mean_T, r.gp_mean_V, r.static_mean_T, r.static_mean_V, r.reward,
                     r.rl_us, r.gp_us, r.proj_us}) {
      append(line, num(v));
    }
    out += line + '\n';
  }
  const auto& m = log.metrics;
  out += "# steps_to_target=" + (m.finished() ? std::to_string(*m.steps_to_target) : "did-not-finish") + '\n';
  out += "# charge_minutes=" + num(m.charge_minutes) + '\n';
  out += "# max_T=" + num(m.max_T) + '\n';
  out += "# max_V=" + num(m.max_V) + '\n';
  out += "# violation_steps_T=" + std::to_string(m.violation_steps_T) + '\n';
  out += "# violation_steps_V=" + std::to_string(m.violation_steps_V) + '\n';
  out += "# cumulative_reward=" + num(m.cumulative_reward) + '\n';
  return out;
}

std::string summary_csv(const std::vector<EpisodeLog>& logs) {
  std::string out = "episode,reward,steps,max_T,max_V,violations_T,violations_V\n";
  for (const auto& log : logs) {
    const auto& m = log.metrics;
    out += std::to_string(log.episode) + ',' + num(m.cumulative_reward) + ',' + std::to_string(m.steps) + ',' +
           num(m.max_T) + ',' + num(m.max_V) + ',' + std::to_string(m.violation_steps_T) + ',' +
           std::to_string(m.violation_steps_V) + '\n';
  }
  return out;
}

void write_logs(const std::vector<EpisodeLog>& logs, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto write = [](const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << text;
  };
  write(dir / "summary.csv", summary_csv(logs));
  for (const auto& log : logs) {
    char name[32];
    std::snprintf(name, sizeof name, "episode_%04d.csv", log.episode);
    write(dir / name, episode_csv(log));
  }
}

}  // namespace fastcharge::protocols
