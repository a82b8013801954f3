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
#include <vector>

#include "fastcharge/core/rng.hpp"
#include "fastcharge/safety/projection.hpp"
#include "fastcharge/safety/safety_layer.hpp"
#include "fastcharge/verify/projection_oracle.hpp"

using namespace fastcharge;
using namespace fastcharge::safety;

namespace {

const ActionBounds kBounds{0.05, 4.5};

ProjectionSettings settings() {
  ProjectionSettings s;
  s.action = kBounds;
  return s;
}

// UUB_T = t0 + slope * a, UUB_V constant.
ConstraintFn linear(double t0, double slope, double v = 4.0) {
  return [=](std::span<const double> a, std::span<ConstraintValues> out) {
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = {t0 + slope * a[i], v};
  };
}

// A GP fitted on constant targets predicts that constant exactly.
gp::GpModel constant_gp(double value, double z) {
  Eigen::MatrixXd x(4, 3);
  x << z, 1.0, 0.5, z, 1.0, 1.5, z, 1.0, 2.5, z, 1.0, 3.5;
  return gp::GpModel::fit(x, Eigen::VectorXd::Constant(4, value), gp::KernelParams{});
}

StaticSafety constant_safety(double t_next, double v_next, double z_t, double z_v) {
  StaticSafety s;
  s.temperature = constant_gp(t_next - z_t, z_t);
  s.voltage = constant_gp(v_next - z_v, z_v);
  return s;
}

}  // namespace

TEST_CASE("uub: mean plus kappa standard deviations") {
  CHECK(uub(gp::Posterior{44.0, 0.25}, 3.0) == 45.5);
  CHECK(uub(gp::Posterior{44.0, 0.25}, 0.0) == 44.0);
  CHECK(uub(gp::Posterior{44.0, 0.0}, 7.0) == 44.0);
}

TEST_CASE("next-state posterior adds the current value to the increment model") {
  const auto m = constant_gp(1.25, 30.0);
  const Eigen::Vector3d x(30.0, 1.0, 2.0);
  const auto inc = m.posterior(x);
  const auto next = next_state_posterior(m, x);
  CHECK(next.mean == inc.mean + 30.0);
  CHECK(next.var == inc.var);
  CHECK(next.mean == doctest::Approx(31.25).epsilon(1e-14));
}

TEST_CASE("adaptive posterior: static 40 plus residual 2.5 gives 42.5 with the static variance") {
  const auto stat = constant_gp(10.0, 30.0);
  ResidualChannel ch(gp::KernelParams{}, 3);
  for (int i = 0; i < 5; ++i) ch.record(Eigen::Vector3d(30.0, 1.0, 0.5 + i), 42.5, 40.0);
  REQUIRE(ch.active());
  const Eigen::Vector3d x(30.0, 1.0, 2.0);
  const auto s = next_state_posterior(stat, x);
  const auto a = adaptive_posterior(stat, ch.model(), x);
  CHECK(s.mean == doctest::Approx(40.0).epsilon(1e-14));
  CHECK(a.mean == doctest::Approx(42.5).epsilon(1e-14));
  CHECK(a.var == s.var);
  CHECK(a.mean - s.mean == ch.model()->posterior(x).mean);
}

TEST_CASE("adaptive posterior: inactive residual model leaves the static posterior unchanged") {
  const auto stat = constant_gp(1.0, 30.0);
  const Eigen::Vector3d x(30.0, 2.0, 2.0);
  const auto a = adaptive_posterior(stat, nullptr, x);
  const auto s = next_state_posterior(stat, x);
  CHECK(a.mean == s.mean);
  CHECK(a.var == s.var);
}

TEST_CASE("residual channel: activation threshold, constant residual recovery and reset") {
  ResidualChannel ch(gp::KernelParams{}, 3);
  ch.record(Eigen::Vector3d(30.0, 1.0, 1.0), 31.0, 30.0);
  CHECK(ch.size() == 1);
  CHECK_FALSE(ch.active());
  ch.record(Eigen::Vector3d(30.5, 1.0, 1.2), 30.5, 30.5);
  CHECK(ch.residuals().back() == 0.0);
  CHECK_FALSE(ch.active());
  ch.record(Eigen::Vector3d(31.0, 1.2, 1.4), 32.0, 31.0);
  CHECK(ch.active());

  ch.reset();
  CHECK(ch.size() == 0);
  CHECK_FALSE(ch.active());
  ch.reset();
  CHECK(ch.size() == 0);

  Rng rng(3);
  for (int i = 0; i < 10; ++i) {
    const Eigen::Vector3d x(rng.uniform(25.0, 40.0), rng.uniform(0.05, 4.5), rng.uniform(0.05, 4.5));
    const double mean = rng.uniform(25.0, 40.0);
    ch.record(x, mean + 1.0, mean);
  }
  REQUIRE(ch.active());
  for (int i = 0; i < 20; ++i) {
    const Eigen::Vector3d q(rng.uniform(25.0, 40.0), rng.uniform(0.05, 4.5), rng.uniform(0.05, 4.5));
    CHECK(std::abs(ch.model()->posterior(q).mean - 1.0) < 0.05);
  }
}

TEST_CASE("residual channel: fifty residuals cleared by reset") {
  ResidualChannel ch(gp::KernelParams{}, 3);
  Rng rng(4);
  for (int i = 0; i < 50; ++i) {
    ch.record(Eigen::Vector3d(rng.uniform(), rng.uniform(), rng.uniform()), rng.normal(), 0.0);
  }
  CHECK(ch.size() == 50);
  ch.reset();
  CHECK(ch.size() == 0);
  CHECK(ch.model() == nullptr);
}

TEST_CASE("dynamic safety: episode reset clears both channels") {
  DynamicSafety d(gp::KernelParams{}, 3);
  for (int i = 0; i < 4; ++i) {
    d.temperature.record(Eigen::Vector3d(30.0, 1.0, i), 31.0, 30.0);
    d.voltage.record(Eigen::Vector3d(4.0, 1.0, i), 4.1, 4.0);
  }
  CHECK(d.temperature.active());
  CHECK(d.voltage.active());
  d.reset_episode();
  CHECK_FALSE(d.temperature.active());
  CHECK_FALSE(d.voltage.active());
}

TEST_CASE("project_action: feasible raw action is returned bit for bit") {
  const auto r = project_action(1.2345678901234567, linear(40.0, 2.0), 45.0, 4.3, settings());
  CHECK(r.action == 1.2345678901234567);
  CHECK_FALSE(r.was_projected);
  CHECK(r.feasible);
  CHECK(r.predicted_T_uub == 40.0 + 2.0 * 1.2345678901234567);
  CHECK(r.evaluations == 1);
}

TEST_CASE("project_action: linear temperature bound lands on 2.5") {
  const auto r = project_action(4.0, linear(40.0, 2.0), 45.0, 4.3, settings());
  CHECK(r.was_projected);
  CHECK(r.feasible);
  CHECK(std::abs(r.action - 2.5) < 1e-3);
  CHECK(r.action <= 2.5);
  CHECK(r.predicted_T_uub <= 45.0);
}

TEST_CASE("project_action: nothing feasible falls back to a_min") {
  const auto r = project_action(3.0, linear(46.0, 1.0), 45.0, 4.3, settings());
  CHECK(r.action == kBounds.min);
  CHECK_FALSE(r.feasible);
  CHECK(r.was_projected);
  CHECK(r.predicted_T_uub == 46.0 + kBounds.min);
}

TEST_CASE("project_action: voltage bound alone can trigger projection") {
  const ConstraintFn fn = [](std::span<const double> a, std::span<ConstraintValues> out) {
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = {30.0, 4.0 + 0.1 * a[i]};
  };
  const auto r = project_action(4.5, fn, 45.0, 4.3, settings());
  CHECK(r.feasible);
  CHECK(std::abs(r.action - 3.0) < 1e-3);
  CHECK(r.predicted_V_uub <= 4.3);
}

TEST_CASE("project_action: lower-bound side projects upward") {
  // feasible only for a >= 2: a decreasing bound
  const auto r = project_action(0.5, linear(47.0, -1.0), 45.0, 4.3, settings());
  CHECK(r.feasible);
  CHECK(std::abs(r.action - 2.0) < 1e-3);
  CHECK(r.action >= 2.0);
}

TEST_CASE("project_action: monotone constraints never push the action above a_raw") {
  Rng rng(21);
  for (int i = 0; i < 200; ++i) {
    const double t0 = rng.uniform(35.0, 46.0);
    const double slope = rng.uniform(0.1, 5.0);
    const double a_raw = rng.uniform(kBounds.min, kBounds.max);
    const auto r = project_action(a_raw, linear(t0, slope), 45.0, 4.3, settings());
    CHECK(r.action <= a_raw);
    if (r.feasible) CHECK(r.predicted_T_uub <= 45.0 + 1e-6);
  }
}

TEST_CASE("project: requires fitted surrogates") {
  StaticSafety empty;
  CHECK_THROWS_WITH_AS(project(1.0, 30.0, 4.0, 1.0, empty, nullptr, settings()), "safety layer not ready",
                       SafetyNotReady);
}

TEST_CASE("project: constant surrogates accept or reject every action") {
  auto ok = constant_safety(40.0, 4.1, 35.0, 4.0);
  auto r = project(3.3, 35.0, 4.0, 1.0, ok, nullptr, settings());
  CHECK(r.action == 3.3);
  CHECK_FALSE(r.was_projected);
  auto hot = constant_safety(46.0, 4.1, 35.0, 4.0);
  r = project(3.3, 35.0, 4.0, 1.0, hot, nullptr, settings());
  CHECK(r.action == kBounds.min);
  CHECK_FALSE(r.feasible);
}

TEST_CASE("project: residual model shifts the bound") {
  auto stat = constant_safety(43.0, 4.0, 35.0, 4.0);
  DynamicSafety dyn(gp::KernelParams{}, 3);
  CHECK_FALSE(project(3.0, 35.0, 4.0, 1.0, stat, &dyn, settings()).was_projected);
  for (int i = 0; i < 4; ++i) dyn.temperature.record(Eigen::Vector3d(35.0, 1.0, 0.5 + i), 46.0, 43.0);
  const auto r = project(3.0, 35.0, 4.0, 1.0, stat, &dyn, settings());
  CHECK_FALSE(r.feasible);
}

TEST_CASE("project: sound and grid-oracle optimal on random surrogate instances") {
  const auto report = verify::projection_oracle_suite(25, 2024, 200000, settings());
  CHECK(report.instances == 25);
  CHECK(report.flag_mismatches == 0);
  CHECK(report.unsound == 0);
  CHECK(report.max_action_error <= 2e-4);
  CHECK(report.feasible_instances > 0);
  CHECK(report.feasible_instances < report.instances);
}

TEST_CASE("static safety json round trip") {
  auto s = constant_safety(40.0, 4.1, 35.0, 4.0);
  s.kappa = 2.5;
  s.temperature_limit = 44.0;
  const auto back = StaticSafety::from_json(nlohmann::json::parse(s.to_json().dump()));
  CHECK(back.kappa == 2.5);
  CHECK(back.temperature_limit == 44.0);
  CHECK(back.voltage_limit == s.voltage_limit);
  REQUIRE(back.ready());
  const Eigen::Vector3d x(35.0, 1.0, 2.0);
  CHECK(back.temperature->posterior(x).mean == s.temperature->posterior(x).mean);
  CHECK(back.voltage->posterior(x).var == s.voltage->posterior(x).var);
}
