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

#include <algorithm>
#include <cmath>
#include <limits>

#include "detail.hpp"

namespace fastcharge::gp::detail {
namespace {

// Box in (log signal_var, log length_scale).
const Eigen::Vector2d kLower(std::log(1e-3), std::log(1e-2));
const Eigen::Vector2d kUpper(std::log(1e3), std::log(1e2));

constexpr double kArmijo = 1e-4;
constexpr double kMaxStep = 2.0;  // in log units

struct Point {
  Eigen::Vector2d theta;
  double value = -std::numeric_limits<double>::infinity();
  Eigen::Vector2d gradient = Eigen::Vector2d::Zero();
  bool ok = false;
};

Eigen::Vector2d clamp_box(const Eigen::Vector2d& t) { return t.cwiseMax(kLower).cwiseMin(kUpper); }

Point evaluate(const Eigen::MatrixXd& xs, const Eigen::VectorXd& ys, double noise_var,
               const Eigen::Vector2d& theta) {
  Point p;
  p.theta = theta;
  try {
    const auto v = lml_with_gradient(xs, ys, {std::exp(theta(0)), std::exp(theta(1)), noise_var});
    if (std::isfinite(v.value) && v.gradient.allFinite()) {
      p.value = v.value;
      p.gradient = v.gradient;
      p.ok = true;
    }
  } catch (const GpError&) {
  }
  return p;
}

// BFGS ascent with a backtracking line search; only improving iterates
// are accepted, so the recorded values are non-decreasing.
Point ascend(const Eigen::MatrixXd& xs, const Eigen::VectorXd& ys, double noise_var,
             const Eigen::Vector2d& start, int max_iterations, std::vector<double>& accepted) {
  Point current = evaluate(xs, ys, noise_var, clamp_box(start));
  if (!current.ok) return current;
  accepted.push_back(current.value);
  Eigen::Matrix2d inv_hessian = Eigen::Matrix2d::Identity();  // of the negated objective

  for (int it = 0; it < max_iterations; ++it) {
    const Eigen::Vector2d g = -current.gradient;
    Eigen::Vector2d dir = -inv_hessian * g;
    if (dir.dot(g) >= 0.0) {
      inv_hessian.setIdentity();
      dir = -g;
    }
    const double longest = dir.cwiseAbs().maxCoeff();
    if (longest > kMaxStep) dir *= kMaxStep / longest;

    Point next;
    bool found = false;
    for (double t = 1.0; t > 1e-10; t *= 0.5) {
      next = evaluate(xs, ys, noise_var, clamp_box(current.theta + t * dir));
      const Eigen::Vector2d s = next.theta - current.theta;
      if (next.ok && next.value > current.value &&
          next.value >= current.value + kArmijo * current.gradient.dot(s)) {
        found = true;
        break;
      }
    }
    if (!found) break;

    const Eigen::Vector2d s = next.theta - current.theta;
    const Eigen::Vector2d y = (-next.gradient) - g;
    const double sy = s.dot(y);
    if (sy > 1e-12) {
      const double rho = 1.0 / sy;
      const Eigen::Matrix2d left = Eigen::Matrix2d::Identity() - rho * s * y.transpose();
      inv_hessian = left * inv_hessian * left.transpose() + rho * s * s.transpose();
    }
    current = next;
    accepted.push_back(current.value);
    if (current.gradient.cwiseAbs().maxCoeff() < 1e-6 || s.cwiseAbs().maxCoeff() < 1e-9) break;
  }
  return current;
}

}  // namespace

KernelParams optimize_hyperparameters(const Eigen::MatrixXd& xs, const Eigen::VectorXd& ys,
                                      const KernelParams& initial, const FitOptions& options,
                                      FitReport& report) {
  std::vector<Eigen::Vector2d> starts{{std::log(initial.signal_var), std::log(initial.length_scale)}};
  Rng rng(options.restart_seed);
  for (int r = 0; r < options.restarts; ++r) {
    starts.emplace_back(rng.uniform(std::log(0.1), std::log(10.0)),
                        rng.uniform(std::log(0.1), std::log(10.0)));
  }

  Point best;
  for (const auto& start : starts) {
    auto& trace = report.accepted_lml.emplace_back();
    const Point p = ascend(xs, ys, initial.noise_var, start, options.max_iterations, trace);
    if (p.ok && p.value > best.value) best = p;
  }
  if (!best.ok) return initial;
  return {std::exp(best.theta(0)), std::exp(best.theta(1)), initial.noise_var};
}

}  // namespace fastcharge::gp::detail
