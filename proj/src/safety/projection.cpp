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

#include "fastcharge/safety/projection.hpp"

#include <cmath>
#include <algorithm>
#include <numeric>
#include <vector>

namespace fastcharge::safety {
namespace {

constexpr std::size_t kChunk = 16;

bool within(const ConstraintValues& v, double t_limit, double v_limit) {
  return v.temperature_uub <= t_limit && v.voltage_uub <= v_limit;
}

ConstraintValues score_one(const ConstraintFn& fn, double a, int& evaluations) {
  ConstraintValues v;
  fn(std::span<const double>(&a, 1), std::span<ConstraintValues>(&v, 1));
  ++evaluations;
  return v;
}

}  // namespace

ProjectionResult project_action(double a_raw, const ConstraintFn& constraints, double t_limit,
                                double v_limit, const ProjectionSettings& settings) {
  ProjectionResult result;
  const ConstraintValues at_raw = score_one(constraints, a_raw, result.evaluations);
  if (within(at_raw, t_limit, v_limit)) {
    result.action = a_raw;
    result.predicted_T_uub = at_raw.temperature_uub;
    result.predicted_V_uub = at_raw.voltage_uub;
    return result;
  }
  result.was_projected = true;

  const auto& bounds = settings.action;
  const int g = settings.grid_points;
  const double spacing = (bounds.max - bounds.min) / (g - 1);
  std::vector<double> grid(static_cast<std::size_t>(g));
  for (int i = 0; i < g; ++i) grid[static_cast<std::size_t>(i)] = i + 1 == g ? bounds.max : bounds.min + i * spacing;

  // Visiting grid points nearest-first (lower index on ties) and stopping at
  // the first feasible one gives the same answer as scoring the whole grid.
  std::vector<int> order(static_cast<std::size_t>(g));
  std::iota(order.begin(), order.end(), 0);
  const auto distance = [&](int i) { return std::abs(grid[static_cast<std::size_t>(i)] - a_raw); };
  std::stable_sort(order.begin(), order.end(), [&](int l, int r) { return distance(l) < distance(r); });

  int best = -1;
  std::vector<double> chunk;
  std::vector<ConstraintValues> values;
  ConstraintValues best_values;
  for (std::size_t pos = 0; pos < order.size() && best < 0; pos += kChunk) {
    const std::size_t n = std::min(kChunk, order.size() - pos);
    chunk.resize(n);
    values.resize(n);
    for (std::size_t k = 0; k < n; ++k) chunk[k] = grid[static_cast<std::size_t>(order[pos + k])];
    constraints(chunk, values);
    result.evaluations += static_cast<int>(n);
    for (std::size_t k = 0; k < n; ++k) {
      if (within(values[k], t_limit, v_limit)) {
        best = order[pos + k];
        best_values = values[k];
        break;
      }
    }
  }
  if (best < 0) {
    const ConstraintValues at_min = score_one(constraints, bounds.min, result.evaluations);
    result.action = bounds.min;
    result.feasible = false;
    result.predicted_T_uub = at_min.temperature_uub;
    result.predicted_V_uub = at_min.voltage_uub;
    return result;
  }

  // Infeasible end of the bracket: a_raw itself when it lies within one grid
  // cell, otherwise the neighbouring grid point on the side of a_raw (which
  // is infeasible, or it would have been closer).
  double feasible_end = grid[static_cast<std::size_t>(best)];
  ConstraintValues feasible_values = best_values;
  double infeasible_end = a_raw;
  if (distance(best) > spacing) {
    const int neighbour = a_raw > feasible_end ? best + 1 : best - 1;
    if (neighbour >= 0 && neighbour < g) infeasible_end = grid[static_cast<std::size_t>(neighbour)];
  }

  while (std::abs(infeasible_end - feasible_end) >= settings.tolerance) {
    const double mid = 0.5 * (feasible_end + infeasible_end);
    const ConstraintValues v = score_one(constraints, mid, result.evaluations);
    if (within(v, t_limit, v_limit)) {
      feasible_end = mid;
      feasible_values = v;
    } else {
      infeasible_end = mid;
    }
  }
  result.action = feasible_end;
  result.predicted_T_uub = feasible_values.temperature_uub;
  result.predicted_V_uub = feasible_values.voltage_uub;
  return result;
}

void surrogate_bounds(double z_temperature, double z_voltage, double a_prev, const StaticSafety& stat,
                      const DynamicSafety* dynamic, std::span<const double> actions,
                      std::span<ConstraintValues> out) {
  if (!stat.ready()) throw SafetyNotReady();
  const auto m = static_cast<Eigen::Index>(actions.size());
  Eigen::MatrixXd xt(m, 3), xv(m, 3);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double a = actions[static_cast<std::size_t>(i)];
    xt.row(i) << z_temperature, a_prev, a;
    xv.row(i) << z_voltage, a_prev, a;
  }
  Eigen::VectorXd mean_t, var_t, mean_v, var_v;
  next_state_posterior_batch(*stat.temperature, xt, mean_t, var_t);
  next_state_posterior_batch(*stat.voltage, xv, mean_v, var_v);
  if (dynamic != nullptr) {
    Eigen::VectorXd dmean, dvar;
    if (const auto* model = dynamic->temperature.model()) {
      model->posterior_batch(xt, dmean, dvar);
      mean_t += dmean;
    }
    if (const auto* model = dynamic->voltage.model()) {
      model->posterior_batch(xv, dmean, dvar);
      mean_v += dmean;
    }
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    auto& o = out[static_cast<std::size_t>(i)];
    o.temperature_uub = mean_t(i) + stat.kappa * std::sqrt(var_t(i));
    o.voltage_uub = mean_v(i) + stat.kappa * std::sqrt(var_v(i));
  }
}

ProjectionResult project(double a_raw, double z_temperature, double z_voltage, double a_prev,
                         const StaticSafety& stat, const DynamicSafety* dynamic,
                         const ProjectionSettings& settings) {
  if (!stat.ready()) throw SafetyNotReady();
  const ConstraintFn fn = [&](std::span<const double> actions, std::span<ConstraintValues> out) {
    surrogate_bounds(z_temperature, z_voltage, a_prev, stat, dynamic, actions, out);
  };
  return project_action(a_raw, fn, stat.temperature_limit, stat.voltage_limit, settings);
}

}  // namespace fastcharge::safety
