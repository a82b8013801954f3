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

#include "fastcharge/verify/projection_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace fastcharge::verify {
namespace {

// Increment surrogate for one variable: a smooth random function of the
// action plus a small dependence on the other inputs.
gp::GpModel random_surrogate(Rng& rng, double z, double a_prev, const ActionBounds& b, double slope_scale) {
  const int n = static_cast<int>(rng.uniform(6.0, 16.0));
  const double c0 = rng.uniform(-0.5, 0.5) * slope_scale;
  const double c1 = rng.uniform(0.2, 1.5) * slope_scale;
  const double wiggle = rng.uniform(0.0, 0.6) * slope_scale;
  const double freq = rng.uniform(0.5, 2.5);
  Eigen::MatrixXd x(n, 3);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    const double a = rng.uniform(b.min, b.max);
    x.row(i) << z + rng.uniform(-0.5, 0.5) * slope_scale, a_prev + rng.uniform(-0.3, 0.3), a;
    y(i) = c0 + c1 * a + wiggle * std::sin(freq * a) + 0.01 * slope_scale * rng.normal();
  }
  const gp::KernelParams k{rng.uniform(0.5, 2.0), rng.uniform(0.6, 2.0), 1e-4};
  return gp::GpModel::fit(x, y, k);
}

}  // namespace

ProjectionInstance random_projection_instance(Rng& rng, const ActionBounds& bounds) {
  ProjectionInstance inst;
  inst.z_temperature = rng.uniform(25.0, 42.0);
  inst.z_voltage = rng.uniform(3.6, 4.2);
  inst.a_prev = rng.uniform(bounds.min, bounds.max);
  inst.a_raw = rng.uniform(bounds.min, bounds.max);
  inst.stat.temperature = random_surrogate(rng, inst.z_temperature, inst.a_prev, bounds, 1.0);
  inst.stat.voltage = random_surrogate(rng, inst.z_voltage, inst.a_prev, bounds, 0.05);
  inst.stat.kappa = rng.uniform(0.5, 3.0);
  // Limits drawn around the range of the bounds so that all-feasible,
  // partly feasible and infeasible instances all occur.
  const std::vector<double> probe{bounds.min, 0.5 * (bounds.min + bounds.max), bounds.max};
  std::vector<safety::ConstraintValues> v(probe.size());
  safety::surrogate_bounds(inst.z_temperature, inst.z_voltage, inst.a_prev, inst.stat, nullptr, probe, v);
  const auto pick = [&](double lo, double hi) { return lo + rng.uniform(-0.15, 1.1) * (hi - lo); };
  const auto [t_lo, t_hi] = std::minmax({v[0].temperature_uub, v[1].temperature_uub, v[2].temperature_uub});
  const auto [v_lo, v_hi] = std::minmax({v[0].voltage_uub, v[1].voltage_uub, v[2].voltage_uub});
  inst.stat.temperature_limit = pick(t_lo, t_hi);
  inst.stat.voltage_limit = rng.uniform() < 0.5 ? v_hi + 1.0 : pick(v_lo, v_hi);
  return inst;
}

DenseOracleResult dense_projection_oracle(const ProjectionInstance& inst, const ActionBounds& bounds,
                                          int points) {
  const auto feasible = [&](const safety::ConstraintValues& c) {
    return c.temperature_uub <= inst.stat.temperature_limit && c.voltage_uub <= inst.stat.voltage_limit;
  };
  safety::ConstraintValues at_raw;
  safety::surrogate_bounds(inst.z_temperature, inst.z_voltage, inst.a_prev, inst.stat, nullptr,
                           std::span<const double>(&inst.a_raw, 1), std::span<safety::ConstraintValues>(&at_raw, 1));
  if (feasible(at_raw)) return {inst.a_raw, true};

  DenseOracleResult best;
  double best_distance = INFINITY;
  constexpr int kBlock = 4096;
  std::vector<double> actions;
  std::vector<safety::ConstraintValues> values;
  const double step = (bounds.max - bounds.min) / (points - 1);
  for (int start = 0; start < points; start += kBlock) {
    const int n = std::min(kBlock, points - start);
    actions.resize(static_cast<std::size_t>(n));
    values.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) actions[static_cast<std::size_t>(i)] = bounds.min + (start + i) * step;
    safety::surrogate_bounds(inst.z_temperature, inst.z_voltage, inst.a_prev, inst.stat, nullptr, actions, values);
    for (int i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      const double d = std::abs(actions[k] - inst.a_raw);
      if (feasible(values[k]) && d < best_distance) {
        best_distance = d;
        best = {actions[k], true};
      }
    }
  }
  if (!best.feasible) best.action = bounds.min;
  return best;
}

ProjectionOracleReport projection_oracle_suite(int instances, std::uint64_t seed, int oracle_points,
                                               const safety::ProjectionSettings& settings) {
  ProjectionOracleReport report;
  Rng rng(seed);
  for (int i = 0; i < instances; ++i) {
    const auto inst = random_projection_instance(rng, settings.action);
    const auto got = safety::project(inst.a_raw, inst.z_temperature, inst.z_voltage, inst.a_prev, inst.stat,
                                     nullptr, settings);
    const auto want = dense_projection_oracle(inst, settings.action, oracle_points);
    ++report.instances;
    if (!got.was_projected) ++report.raw_feasible;
    if (got.feasible != want.feasible) {
      ++report.flag_mismatches;
      continue;
    }
    if (got.feasible) {
      ++report.feasible_instances;
      report.max_action_error = std::max(report.max_action_error, std::abs(got.action - want.action));
      if (got.predicted_T_uub > inst.stat.temperature_limit + 1e-6 ||
          got.predicted_V_uub > inst.stat.voltage_limit + 1e-6) {
        ++report.unsound;
      }
    }
  }
  return report;
}

}  // namespace fastcharge::verify
