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

#include <doctest.h>

#include <cmath>

#include "fastcharge/battery/battery.hpp"
#include "fastcharge/protocols/cccv.hpp"
#include "fastcharge/protocols/episode.hpp"
#include "fastcharge/protocols/evaluate.hpp"

using namespace fastcharge;
using namespace fastcharge::protocols;

namespace {

Policy constant(double a) {
  return [a](const AgentState&) { return a; };
}

}  // namespace

TEST_CASE("cccv: constant current below the cv voltage") {
  const CccvParams p{2.0, 4.2, 100.0, 0.05};
  BatteryState s;
  s.voltage = 4.1;
  CHECK(cccv_action(s, p, 5.0, ActionBounds{}) == 2.0);
  s.voltage = 4.2;
  CHECK(cccv_action(s, p, 5.0, ActionBounds{}) == 2.0);
}

TEST_CASE("cccv: proportional taper above the cv voltage") {
  const CccvParams p{2.0, 4.2, 100.0, 0.05};
  BatteryState s;
  s.voltage = 4.25;
  // 2 - 100 * 0.05 / 5
  CHECK(cccv_action(s, p, 5.0, ActionBounds{}) == doctest::Approx(1.0).epsilon(1e-12));
  s.voltage = 4.5;
  CHECK(cccv_action(s, p, 5.0, ActionBounds{}) == 0.05);
  CHECK(cccv_action(s, CccvParams{2.0, 4.2, 100.0, 0.3}, 5.0, ActionBounds{}) == 0.3);
  CHECK(cccv_action(s, p, 5.0, ActionBounds{0.1, 4.5}) == 0.1);
}

TEST_CASE("cccv: fixed-condition rollout holds the voltage near the cv setpoint") {
  const auto cfg = fixed_condition_config();
  const auto logs = evaluate(cfg, cccv_policy(cfg), {});
  REQUIRE(logs.size() == 1);
  const auto& m = logs[0].metrics;
  CHECK(m.finished());
  CHECK(m.max_V <= cfg.cccv.cv_voltage + 0.02);
  CHECK(m.violations() == 0);
  for (const auto& r : logs[0].rows) {
    CHECK(r.executed_action <= cfg.cccv.cc_rate);
    CHECK(r.executed_action >= cfg.action.min);
  }
}

TEST_CASE("metrics: consistent with the per-step rows") {
  const auto cfg = fixed_condition_config();
  const auto log = evaluate(cfg, constant(3.0), {}).front();
  const auto& m = log.metrics;
  double reward = 0.0, max_T = -1e9, max_V = -1e9;
  int vt = 0, vv = 0;
  for (std::size_t i = 0; i < log.rows.size(); ++i) {
    const auto& r = log.rows[i];
    CHECK(r.t == static_cast<int>(i) + 1);
    CHECK(r.executed_action == 3.0);
    CHECK(std::isnan(r.uub_T));
    reward += r.reward;
    max_T = std::max(max_T, r.temperature);
    max_V = std::max(max_V, r.voltage);
    vt += r.temperature > cfg.temperature_limit;
    vv += r.voltage > cfg.voltage_limit;
  }
  CHECK(m.steps == static_cast<int>(log.rows.size()));
  CHECK(m.cumulative_reward == reward);
  CHECK(m.max_T == max_T);
  CHECK(m.max_V == max_V);
  CHECK(m.violation_steps_T == vt);
  CHECK(m.violation_steps_V == vv);
  if (m.finished()) {
    CHECK(log.rows.back().soc >= cfg.soc_target);
    CHECK(m.charge_minutes == doctest::Approx(m.steps * cfg.dt / 60.0));
  }
}

TEST_CASE("metrics: did-not-finish is charged the full horizon") {
  auto cfg = fixed_condition_config();
  cfg.max_steps = 20;
  const auto m = evaluate(cfg, constant(cfg.action.min), {}).front().metrics;
  CHECK_FALSE(m.finished());
  CHECK(m.steps == 20);
  CHECK(m.charge_minutes == doctest::Approx(20 * cfg.dt / 60.0));
}

TEST_CASE("rollout: minimum current never violates, maximum current does") {
  const auto cfg = fixed_condition_config();
  const auto slow = evaluate(cfg, constant(cfg.action.min), {}).front().metrics;
  CHECK(slow.violations() == 0);
  CHECK(slow.steps == cfg.max_steps);
  const auto fast = evaluate(cfg, constant(cfg.action.max), {}).front().metrics;
  CHECK(fast.violations() > 0);
  CHECK(fast.max_T > cfg.temperature_limit);
}

TEST_CASE("rollout: out-of-range policy outputs are clamped") {
  const auto cfg = fixed_condition_config();
  const auto log = evaluate(cfg, constant(99.0), {}).front();
  for (const auto& r : log.rows) {
    CHECK(r.raw_action == 99.0);
    CHECK(r.executed_action == cfg.action.max);
  }
}

TEST_CASE("rollout: deterministic for a given config") {
  const auto cfg = varying_condition_config();
  EvaluateOptions opts;
  opts.episodes = 3;
  opts.start_episode = 140;
  const auto a = evaluate(cfg, cccv_policy(cfg), opts);
  const auto b = evaluate(cfg, cccv_policy(cfg), opts);
  CHECK(summary_csv(a) == summary_csv(b));
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(episode_csv(a[i]) == episode_csv(b[i]));
  CHECK(a[0].episode == 140);
}

TEST_CASE("episode: transition carries the executed action and done only at target") {
  const auto cfg = fixed_condition_config();
  Episode ep(cfg, 0, BatteryState{});
  const SafetyHooks hooks = make_hooks(cfg, nullptr, nullptr);
  const AgentState first = ep.observation();
  CHECK(first.soc == cfg.soc_start);
  const auto tr = ep.advance(-3.0, hooks);
  CHECK(tr.action == cfg.action.min);
  CHECK(tr.state == first);
  CHECK(tr.next_state == ep.observation());
  CHECK(tr.next_state.prev_action == cfg.action.min);
  CHECK_FALSE(tr.done);
  Transition last;
  while (!ep.over()) last = ep.advance(4.0, hooks);
  CHECK(last.done);
  CHECK(last.next_state.soc >= cfg.soc_target);
}

TEST_CASE("episode csv: header, one line per step and footer") {
  auto cfg = fixed_condition_config();
  cfg.max_steps = 5;
  const auto log = evaluate(cfg, constant(1.0), {}).front();
  const auto csv = episode_csv(log);
  CHECK(csv.rfind("t,soc,V,T,", 0) == 0);
  int lines = 0, footer = 0;
  for (char c : csv) lines += c == '\n';
  std::size_t pos = 0;
  while ((pos = csv.find("\n#", pos)) != std::string::npos) ++footer, ++pos;
  CHECK(lines == 1 + 5 + footer);
  CHECK(csv.find("# steps_to_target=did-not-finish") != std::string::npos);
  CHECK(summary_csv({log}).rfind("episode,reward,steps,max_T,max_V,violations_T,violations_V\n", 0) == 0);
}

TEST_CASE("adaptive evaluation needs a static layer") {
  EvaluateOptions opts;
  opts.adaptive = true;
  CHECK_THROWS_AS(evaluate(fixed_condition_config(), constant(1.0), opts), std::invalid_argument);
}
